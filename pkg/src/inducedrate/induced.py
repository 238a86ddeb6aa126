"""Induced logical/syndrome distribution of a stabilizer transform.

Every evaluator here computes the same object: the pushforward of the i.i.d.
physical error distribution under ``e -> (a, b, s)``, i.e. the total
probability of each stabilizer coset.  Dense tables are indexed by
``a | b << k | s << 2k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .channel import TINY, PauliDist, entropy_bits, pattern_probs
from .symplectic import Tableau

__all__ = [
    "InducedJoint",
    "EntropySummary",
    "MemoryCapExceeded",
    "CosetSizeCapExceeded",
    "DENSE_METHODS",
    "induced_joint_dense",
    "induced_joint_streaming",
    "summarize",
    "apply_correction",
    "coset_ml_rule",
    "evaluate",
]

DEFAULT_MAX_TABLE_BITS = 26
DEFAULT_MAX_STREAM_R = 8
# direct binning and coordinate enumeration materialise 4**n arrays
MAX_ENUM_QUBITS = 12
CONVOLUTION_MAX_BITS = 20
_STREAM_BLOCKS = 64


class MemoryCapExceeded(RuntimeError):
    """Dense table would exceed the configured size; use the streaming path."""


class CosetSizeCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class InducedJoint:
    n: int
    k: int
    r: int
    table: np.ndarray

    def by_syndrome(self) -> np.ndarray:
        """View of shape ``(2**r, 4**k)``: row ``s``, column ``a | b << k``."""
        return self.table.reshape(1 << self.r, 1 << (2 * self.k))

    def prob(self, a: int, b: int, s: int) -> float:
        return float(self.table[a | (b << self.k) | (s << (2 * self.k))])

    def syndrome_marginal(self) -> np.ndarray:
        return self.by_syndrome().sum(axis=1)


@dataclass(frozen=True)
class EntropySummary:
    n: int
    k: int
    H_LS: float
    H_S: float
    H_L_given_S: float

    @property
    def R_ind(self) -> float:
        return (self.k - self.H_L_given_S) / self.n


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _xor_span_table(vectors) -> np.ndarray:
    """``out[c]`` = XOR of ``vectors[j]`` over the set bits ``j`` of ``c``."""
    out = np.zeros(1, dtype=np.int64)
    for v in vectors:
        out = np.concatenate([out, out ^ np.int64(v)])
    return out


def _bit_images(T: Tableau) -> list[int]:
    """Dense-table index of every packed input bit (X bits first, then Z).

    For a single-qubit X (Z) the product with a row is that row's Z (X) bit
    on the same qubit, so no general decomposition is needed.
    """
    k = T.k

    def packed(block, attr, q):
        return sum(((getattr(v, attr) >> q) & 1) << i for i, v in enumerate(block))

    images = []
    for swap in ("z", "x"):
        for q in range(T.n):
            a, b, s = packed(T.LZ, swap, q), packed(T.LX, swap, q), packed(T.H, swap, q)
            images.append(a | (b << k) | (s << (2 * k)))
    return images


def _table_bits(T: Tableau) -> int:
    return 2 * T.k + T.r


# ---------------------------------------------------------------------------
# dense evaluators
# ---------------------------------------------------------------------------


def _joint_binning(T: Tableau, dist: PauliDist) -> np.ndarray:
    # decompose every one of the 4**n patterns and bin its probability
    index = _xor_span_table(_bit_images(T))
    return np.bincount(index, weights=pattern_probs(dist, T.n), minlength=1 << _table_bits(T))


def _joint_coordinates(T: Tableau, dist: PauliDist) -> np.ndarray:
    # e = tH + aLX + bLZ + sG over all coordinates, t varying fastest; then sum over t
    rows = T.H + T.LX + T.LZ + T.G
    patterns = _xor_span_table([row.bits for row in rows])
    probs = pattern_probs(dist, T.n)[patterns]
    return probs.reshape(1 << _table_bits(T), 1 << T.r).sum(axis=1)


def _joint_convolution(T: Tableau, dist: PauliDist) -> np.ndarray:
    # n-fold XOR convolution of the per-qubit 4-point pmfs
    images = _bit_images(T)
    n = T.n
    size = 1 << _table_bits(T)
    p_i, p_x, p_y, p_z = dist.as_tuple()
    idx = np.arange(size, dtype=np.int64)
    joint = np.zeros(size)
    joint[0] = 1.0
    for q in range(n):
        sx, sz = images[q], images[n + q]
        joint = (
            p_i * joint
            + p_x * joint[idx ^ sx]
            + p_z * joint[idx ^ sz]
            + p_y * joint[idx ^ (sx ^ sz)]
        )
    return joint


_DENSE = {
    "binning": _joint_binning,
    "coordinates": _joint_coordinates,
    "convolution": _joint_convolution,
}
DENSE_METHODS = tuple(_DENSE)


def induced_joint_dense(
    T: Tableau,
    dist: PauliDist,
    method: str = "auto",
    max_table_bits: int = DEFAULT_MAX_TABLE_BITS,
) -> InducedJoint:
    """Exact ``p(a, b, s)`` as a dense table.

    ``method`` is one of ``"binning"``, ``"coordinates"``, ``"convolution"``
    or ``"auto"`` (convolution).  The first two enumerate all ``4**n``
    patterns and are limited to ``n <= 12``.
    """
    bits = _table_bits(T)
    if bits > max_table_bits:
        raise MemoryCapExceeded(
            f"dense table needs 2^{bits} entries (cap 2^{max_table_bits}); use streaming"
        )
    if method == "auto":
        method = "convolution"
    try:
        fn = _DENSE[method]
    except KeyError:
        raise ValueError(f"unknown dense method {method!r}") from None
    if method != "convolution" and T.n > MAX_ENUM_QUBITS:
        raise MemoryCapExceeded(f"{method} enumerates 4^{T.n} patterns (cap n={MAX_ENUM_QUBITS})")
    return InducedJoint(T.n, T.k, T.r, fn(T, dist))


def summarize(J: InducedJoint) -> EntropySummary:
    """Entropies of the joint table and the induced rate ``(k - H(L|S)) / n``."""
    rows = J.by_syndrome()
    p_s = rows.sum(axis=1)
    # H(L|S) = sum_s p(s) H(L | S=s), written as -sum p(l,s) log p(l|s)
    live = rows > TINY
    cond = np.divide(rows, p_s[:, None], out=np.ones_like(rows), where=live)
    h_cond = float(-np.sum(rows[live] * np.log2(cond[live])))
    return EntropySummary(
        n=J.n,
        k=J.k,
        H_LS=entropy_bits(J.table),
        H_S=entropy_bits(p_s),
        H_L_given_S=h_cond,
    )


# ---------------------------------------------------------------------------
# streaming evaluator
# ---------------------------------------------------------------------------


def _part_tables(T: Tableau, dist: PauliDist, offset: int, width: int):
    """Probabilities and syndromes over a contiguous block of qubits.

    Local index is ``x | z << width`` for the block's own x and z bits.
    """
    mask = (1 << width) - 1
    probs = pattern_probs(dist, width)
    local = np.arange(1 << (2 * width), dtype=np.int64)
    xs, zs = local & mask, local >> width
    syn = np.zeros(local.shape, dtype=np.int64)
    for i, h in enumerate(T.H):
        hx, hz = (h.x >> offset) & mask, (h.z >> offset) & mask
        par = (np.bitwise_count(xs & hz) + np.bitwise_count(zs & hx)) & 1
        syn |= par.astype(np.int64) << i
    return probs, syn


def induced_joint_streaming(
    T: Tableau,
    dist: PauliDist,
    max_r: int = DEFAULT_MAX_STREAM_R,
) -> EntropySummary:
    """Entropy summary without materialising the joint table.

    Streams all ``4**n`` patterns and adds each coset's probability once, at
    its smallest member.  Memory is ``O(4**(n/2) + 2**r)``.
    """
    from ._kernels import stream_coset_entropy

    n, r = T.n, T.r
    if r > max_r:
        raise CosetSizeCapExceeded(f"cosets have 2^{r} members (cap 2^{max_r})")
    n_lo = (n + 1) // 2
    n_hi = n - n_lo
    p_lo, s_lo = _part_tables(T, dist, 0, n_lo)
    p_hi, s_hi = _part_tables(T, dist, n_lo, n_hi)

    group = _xor_span_table([h.bits for h in T.H])
    lo_mask, hi_mask = (1 << n_lo) - 1, (1 << n_hi) - 1
    t_lo = (group & lo_mask) | (((group >> n) & lo_mask) << n_lo)
    t_hi = ((group >> n_lo) & hi_mask) | (((group >> (n + n_lo)) & hi_mask) << n_hi)

    n_blocks = min(_STREAM_BLOCKS, p_hi.shape[0])
    bounds = np.linspace(0, p_hi.shape[0], n_blocks + 1).astype(np.int64)
    h_blocks, syn_blocks = stream_coset_entropy(
        bounds, p_hi, p_lo, s_hi, s_lo, t_hi, t_lo, 2 * n_lo, 1 << r, TINY
    )
    h_ls = math.fsum(h_blocks)
    p_s = np.array([math.fsum(col) for col in syn_blocks.T])
    h_s = entropy_bits(p_s)
    return EntropySummary(n=n, k=T.k, H_LS=h_ls, H_S=h_s, H_L_given_S=h_ls - h_s)


# ---------------------------------------------------------------------------
# correction rules
# ---------------------------------------------------------------------------

def apply_correction(J: InducedJoint, rule: Mapping[int, tuple[int, int]] | Callable) -> InducedJoint:
    """Relabel ``p(a, b, s) -> p(a ^ a_c(s), b ^ b_c(s), s)`` for each syndrome."""
    lookup = rule.__getitem__ if isinstance(rule, Mapping) else rule
    rows = J.by_syndrome()
    labels = np.arange(rows.shape[1])
    out = np.empty_like(rows)
    for s in range(rows.shape[0]):
        a_c, b_c = lookup(s)
        out[s] = rows[s][labels ^ (a_c | (b_c << J.k))]
    return InducedJoint(J.n, J.k, J.r, out.reshape(-1))


def coset_ml_rule(J: InducedJoint) -> dict[int, tuple[int, int]]:
    """Most likely logical label per syndrome (lowest index wins ties)."""
    mask = (1 << J.k) - 1
    best = np.argmax(J.by_syndrome(), axis=1)
    return {s: (int(l) & mask, int(l) >> J.k) for s, l in enumerate(best)}


# ---------------------------------------------------------------------------
# selector
# ---------------------------------------------------------------------------

METHODS = ("auto", "streaming") + DENSE_METHODS


def evaluate(T: Tableau, dist: PauliDist, method: str = "auto") -> EntropySummary:
    """Exact :class:`EntropySummary` for one transform and channel.

    ``auto`` picks the per-qubit convolution for tables up to 2^20 entries,
    streaming when cosets are small, and coordinate enumeration otherwise.
    """
    if method == "streaming":
        return induced_joint_streaming(T, dist)
    if method != "auto":
        return summarize(induced_joint_dense(T, dist, method))
    if dist.is_noiseless():
        return EntropySummary(n=T.n, k=T.k, H_LS=0.0, H_S=0.0, H_L_given_S=0.0)
    if _table_bits(T) <= CONVOLUTION_MAX_BITS:
        return summarize(induced_joint_dense(T, dist, "convolution"))
    if T.r <= DEFAULT_MAX_STREAM_R:
        return induced_joint_streaming(T, dist)
    if T.n <= MAX_ENUM_QUBITS:
        return summarize(induced_joint_dense(T, dist, "coordinates"))
    raise MemoryCapExceeded(
        f"[[{T.n},{T.k}]] code: no evaluator fits (2k+r={_table_bits(T)}, r={T.r})"
    )
