"""Candidate stabilizer codes in Gottesman standard form.

Column layout of a standard-form check matrix with ``r_x`` X-type rows,
``r_z`` Z-type rows and ``k`` logical qubits::

    X part                 | Z part
    I_rx   A1     A2       | B      C1     C2        (r_x rows)
    0      0      0        | D      I_rz   E         (r_z rows)

A *filling* is the integer formed by concatenating the free blocks
``A1 A2 B C1 C2 D E`` with ``A1`` most significant; inside a block, entry
``(i, j)`` of a ``rows x cols`` block sits at bit ``i * cols + j``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .symplectic import CodeError, PauliVec, check_generators, kernel_basis, rank, solve_linear

__all__ = [
    "StandardFormShape",
    "SearchConfig",
    "SearchStats",
    "BudgetExceeded",
    "n_free",
    "standard_form",
    "dfs_enumerate",
    "random_candidate",
    "sweep",
    "shapes",
]

log = logging.getLogger(__name__)

DEFAULT_T = 10**6
DEFAULT_SAMPLE_COUNT = 10**4


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class StandardFormShape:
    n: int
    k: int
    r_x: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.k <= self.n - 1 or not 0 <= self.r_x <= self.r:
            raise ValueError(f"invalid standard-form shape {self}")

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def r_z(self) -> int:
        return self.r - self.r_x

    def x_blocks(self) -> list[tuple[int, int]]:
        """(rows, cols) of A1, A2, B, C1, C2 in significance order."""
        rx, rz, k = self.r_x, self.r_z, self.k
        return [(rx, rz), (rx, k), (rx, rx), (rx, rz), (rx, k)]

    def z_blocks(self) -> list[tuple[int, int]]:
        """(rows, cols) of D, E."""
        return [(self.r_z, self.r_x), (self.r_z, self.k)]


def n_free(shape: StandardFormShape) -> int:
    rx, rz, k = shape.r_x, shape.r_z, shape.k
    return rx * rx + 3 * rx * rz + 2 * rx * k + rz * k


def _split(filling: int, blocks: list[tuple[int, int]]) -> list[list[int]]:
    """Cut a filling into per-block row lists; the last block is least significant."""
    out = []
    for rows, cols in reversed(blocks):
        mask = (1 << cols) - 1
        out.append([(filling >> (i * cols)) & mask for i in range(rows)])
        filling >>= rows * cols
    return out[::-1]


def _x_rows(shape: StandardFormShape, fx: int) -> list[tuple[int, int]]:
    rx, rz = shape.r_x, shape.r_z
    a1, a2, b, c1, c2 = _split(fx, shape.x_blocks())
    off = rx + rz
    return [
        ((1 << i) | (a1[i] << rx) | (a2[i] << off), b[i] | (c1[i] << rx) | (c2[i] << off))
        for i in range(rx)
    ]


def _z_rows(shape: StandardFormShape, fz: int) -> list[int]:
    rx, rz = shape.r_x, shape.r_z
    d, e = _split(fz, shape.z_blocks())
    return [d[j] | (1 << (rx + j)) | (e[j] << (rx + rz)) for j in range(rz)]


def standard_form(shape: StandardFormShape, filling: int) -> tuple[PauliVec, ...]:
    """Check matrix for one filling of the free blocks (commutation unchecked)."""
    n_z = shape.r_z * (shape.r_x + shape.k)
    fx, fz = filling >> n_z, filling & ((1 << n_z) - 1)
    rows = [PauliVec(shape.n, x, z) for x, z in _x_rows(shape, fx)]
    rows += [PauliVec(shape.n, 0, z) for z in _z_rows(shape, fz)]
    return tuple(rows)


def _x_rows_commute(rows: list[tuple[int, int]]) -> bool:
    for (xi, zi), (xj, zj) in itertools.combinations(rows, 2):
        if ((xi & zj).bit_count() + (zi & xj).bit_count()) & 1:
            return False
    return True


@dataclass
class SearchStats:
    """Visit counters for the pruned enumeration."""

    x_nodes: int = 0
    x_commuting: int = 0
    z_nodes: int = 0
    yielded: int = 0


def dfs_enumerate(
    shape: StandardFormShape,
    T: int | None = DEFAULT_T,
    stats: SearchStats | None = None,
) -> Iterator[tuple[PauliVec, ...]]:
    """Yield every commuting standard-form matrix of ``shape``.

    Fillings of the X-type rows are visited in odometer order (``C2``
    fastest); the Z-type blocks ``D, E`` are only enumerated below an X-row
    assignment whose rows already commute.
    """
    total = n_free(shape)
    if T is not None and (1 << total) > T:
        raise BudgetExceeded(f"2^{total} fillings exceed the budget T={T}")
    stats = stats if stats is not None else SearchStats()
    n_xbits = sum(r * c for r, c in shape.x_blocks())
    n_zbits = total - n_xbits
    n = shape.n

    # A Z-type row (pure Z) commutes with X-type row (x, z) iff x.zrow is even,
    # and Z-type rows always commute among themselves.
    for fx in range(1 << n_xbits):
        stats.x_nodes += 1
        xrows = _x_rows(shape, fx)
        if not _x_rows_commute(xrows):
            continue
        stats.x_commuting += 1
        head = tuple(PauliVec(n, x, z) for x, z in xrows)
        xs = [x for x, _ in xrows]
        for fz in range(1 << n_zbits):
            stats.z_nodes += 1
            zrows = _z_rows(shape, fz)
            if all(not ((x & zr).bit_count() & 1) for zr in zrows for x in xs):
                stats.yielded += 1
                yield head + tuple(PauliVec(n, 0, zr) for zr in zrows)


def _random_bits(rng: np.random.Generator, width: int) -> int:
    if width <= 0:
        return 0
    return int.from_bytes(rng.bytes((width + 7) // 8), "little") & ((1 << width) - 1)


def random_candidate(shape: StandardFormShape, rng: np.random.Generator) -> tuple[PauliVec, ...] | None:
    """Random commuting check matrix in the relaxed form, or ``None`` to restart.

    X-type rows are ``(I | A, B | C)``; each Z-part after the first is a
    uniformly random solution of the commutation constraints against the
    earlier rows.  Z-type rows mix a kernel basis of the X-type X-parts by a
    random full-rank matrix.
    """
    n, rx, rz = shape.n, shape.r_x, shape.r_z
    xs: list[int] = []
    zs: list[int] = []
    for u in range(rx):
        x = (1 << u) | (_random_bits(rng, n - rx) << rx)
        if u == 0:
            z = _random_bits(rng, n)
        else:
            rhs = sum((((zi & x).bit_count()) & 1) << i for i, zi in enumerate(zs))
            z = solve_linear(xs, rhs, n, rng)
            if z is None:
                return None
        xs.append(x)
        zs.append(z)

    ker = kernel_basis(xs, n)
    if len(ker) < rz:
        return None
    z_rows: list[int] = []
    if rz:
        while True:
            mix = [_random_bits(rng, len(ker)) for _ in range(rz)]
            if rank(mix) == rz:
                break
        for coeffs in mix:
            v = 0
            for i, basis_vec in enumerate(ker):
                if (coeffs >> i) & 1:
                    v ^= basis_vec
            z_rows.append(v)

    H = tuple(PauliVec(n, x, z) for x, z in zip(xs, zs)) + tuple(PauliVec(n, 0, z) for z in z_rows)
    try:
        check_generators(H)
    except CodeError:
        return None
    return H


@dataclass(frozen=True)
class SearchConfig:
    n_min: int = 2
    n_max: int = 12
    T: int = DEFAULT_T
    seed: int = 0
    sample_count: int = DEFAULT_SAMPLE_COUNT
    # attempts allowed per accepted random sample before a cell gives up
    max_attempts_factor: int = 100
    k_values: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        if self.n_min < 2 or self.n_max < self.n_min:
            raise ValueError(f"need 2 <= n_min <= n_max, got {self.n_min}, {self.n_max}")
        if self.T < 0 or self.sample_count < 0:
            raise ValueError("T and sample_count must be non-negative")


def shapes(config: SearchConfig) -> Iterator[StandardFormShape]:
    for n in range(config.n_min, config.n_max + 1):
        for k in range(1, n):
            if config.k_values is not None and k not in config.k_values:
                continue
            for r_x in range(n - k + 1):
                yield StandardFormShape(n, k, r_x)


def cell_candidates(shape: StandardFormShape, config: SearchConfig) -> Iterator[tuple[PauliVec, ...]]:
    """Candidates for one ``(n, k, r_x)`` cell, deterministic given the config."""
    if (1 << n_free(shape)) <= config.T:
        yield from dfs_enumerate(shape, config.T)
        return
    rng = np.random.default_rng([config.seed, shape.n, shape.k, shape.r_x])
    accepted = attempts = 0
    limit = config.sample_count * config.max_attempts_factor
    while accepted < config.sample_count and attempts < limit:
        attempts += 1
        H = random_candidate(shape, rng)
        if H is not None:
            accepted += 1
            yield H
    if accepted < config.sample_count:
        log.warning("cell %s: only %d of %d random samples accepted", shape, accepted, config.sample_count)


def sweep(config: SearchConfig) -> Iterator[tuple[StandardFormShape, tuple[PauliVec, ...]]]:
    """All candidates over every ``(n, k, r_x)`` triple in the configured range."""
    for shape in shapes(config):
        for H in cell_candidates(shape, config):
            yield shape, H
