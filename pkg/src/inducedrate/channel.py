"""Single-qubit Pauli channels and their i.i.d. extension."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .symplectic import PauliVec

__all__ = [
    "PauliDist",
    "NoValidRootError",
    "skewed_dist",
    "skewed_params",
    "dist_from_total_p",
    "pattern_prob",
    "pattern_probs",
    "entropy_bits",
    "hashing_bound",
    "ChannelSpec",
    "parse_channel",
]

# probabilities below this count as exact zeros in entropy sums
TINY = 1e-300


class NoValidRootError(ValueError):
    pass


@dataclass(frozen=True)
class PauliDist:
    p_I: float
    p_X: float
    p_Y: float
    p_Z: float

    def __post_init__(self):
        probs = self.as_tuple()
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise ValueError(f"probabilities must lie in [0, 1], got {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got sum {sum(probs)!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_I, self.p_X, self.p_Y, self.p_Z)

    def by_bits(self) -> np.ndarray:
        """Probabilities indexed by ``x | z << 1``, i.e. order I, X, Z, Y."""
        return np.array([self.p_I, self.p_X, self.p_Z, self.p_Y])

    @property
    def total_error(self) -> float:
        return 1.0 - self.p_I

    def is_noiseless(self) -> bool:
        return self.p_I == 1.0


def skewed_dist(q_x: float, q_z: float) -> PauliDist:
    """Independent X and Z flips with probabilities ``q_x`` and ``q_z``."""
    for name, q in (("q_x", q_x), ("q_z", q_z)):
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"{name}={q} outside [0, 1]")
    return PauliDist(
        p_I=(1 - q_x) * (1 - q_z),
        p_X=q_x * (1 - q_z),
        p_Y=q_x * q_z,
        p_Z=(1 - q_x) * q_z,
    )


def skewed_params(p: float, eta: float) -> tuple[float, float]:
    """``(q_x, q_z)`` with ``q_x = eta * q_z`` and total error ``1 - p_I = p``.

    Takes the smaller root of ``(1 - eta q)(1 - q) = 1 - p``, the branch that
    reaches the noiseless channel at ``p = 0``.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p={p} outside [0, 1)")
    disc = (1 + eta) ** 2 - 4 * eta * p
    if disc < 0:
        raise NoValidRootError(f"no real root for p={p}, eta={eta}")
    # same root as (1 + eta - sqrt(disc)) / (2 eta), without the cancellation
    q_z = 2 * p / (1 + eta + math.sqrt(disc))
    q_x = eta * q_z
    if not (0.0 <= q_z <= 1.0 and 0.0 <= q_x <= 1.0):
        raise NoValidRootError(f"root q_z={q_z}, q_x={q_x} is not a probability pair")
    return q_x, q_z


def dist_from_total_p(p: float, eta: float) -> PauliDist:
    return skewed_dist(*skewed_params(p, eta))


def pattern_prob(dist: PauliDist, e: PauliVec) -> float:
    """Probability of the n-qubit error pattern ``e`` under i.i.d. noise."""
    table = dist.by_bits()
    prob = 1.0
    for i in range(e.n):
        prob *= table[((e.x >> i) & 1) | (((e.z >> i) & 1) << 1)]
    return float(prob)


def pattern_probs(dist: PauliDist, n: int) -> np.ndarray:
    """Probabilities of all ``4**n`` patterns, indexed by packed ``x | z << n``."""
    table = dist.by_bits()
    # axis order (z_{n-1} .. z_0, x_{n-1} .. x_0) matches the C-order ravel
    probs = np.ones((2,) * (2 * n))
    for q in range(n):
        shape = [1] * (2 * n)
        shape[n - 1 - q] = 2
        shape[2 * n - 1 - q] = 2
        factor = np.array([[table[0], table[1]], [table[2], table[3]]])
        probs = probs * factor.reshape(shape)
    return probs.reshape(-1)


def entropy_bits(probs: Iterable[float] | np.ndarray) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > TINY]
    return float(-np.sum(p * np.log2(p)))


def hashing_bound(dist: PauliDist) -> float:
    return 1.0 - entropy_bits(dist.as_tuple())


@dataclass(frozen=True)
class ChannelSpec:
    """Either a fixed distribution or the skewed family at bias ``eta``."""

    dist: PauliDist | None = None
    eta: float | None = None
    p: float | None = None

    @property
    def is_family(self) -> bool:
        return self.dist is None

    def at(self, p: float | None = None) -> PauliDist:
        if self.dist is not None:
            if p is not None:
                raise ValueError("explicit channel does not take a p value")
            return self.dist
        p = self.p if p is None else p
        if p is None:
            raise ValueError("skewed channel needs a p value")
        return dist_from_total_p(p, self.eta)

    def family(self) -> Callable[[float], PauliDist]:
        return self.at


_SKEWED = re.compile(r"^skewed:(.*)$")


def parse_channel(text: str) -> ChannelSpec:
    """Parse ``"pI,pX,pY,pZ"`` or ``"skewed:eta=<float>[,p=<float>]"``."""
    text = text.strip()
    m = _SKEWED.match(text)
    if m:
        fields = {}
        for item in filter(None, m.group(1).split(",")):
            key, sep, val = item.partition("=")
            if not sep or key.strip() not in ("eta", "p"):
                raise ValueError(f"bad skewed channel field {item!r}")
            fields[key.strip()] = float(val)
        if "eta" not in fields:
            raise ValueError("skewed channel requires eta=<float>")
        spec = ChannelSpec(eta=fields["eta"], p=fields.get("p"))
        if spec.p is not None:
            spec.at()
        return spec
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 'pI,pX,pY,pZ' or 'skewed:eta=..', got {text!r}")
    return ChannelSpec(dist=PauliDist(*(float(v) for v in parts)))
