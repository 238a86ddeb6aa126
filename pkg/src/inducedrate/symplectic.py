"""Binary symplectic representation of Paulis and F2 linear algebra.

Paulis are handled modulo phase as packed integers: bits ``0..n-1`` hold the
X-part and bits ``n..2n-1`` the Z-part, with bit 0 / bit ``n`` belonging to
qubit 1.  Generic F2 matrices are sequences of ints, one int per row.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PauliVec",
    "Tableau",
    "CodeError",
    "NotCommutingError",
    "NotIndependentError",
    "ZeroRowError",
    "symplectic_product",
    "rank",
    "row_reduce",
    "kernel_basis",
    "solve_linear",
    "build_tableau",
    "decompose",
    "recompose",
]

_LABELS = "IXZY"  # index = x | z << 1


class CodeError(ValueError):
    """Invalid stabilizer generator set."""


class NotCommutingError(CodeError):
    pass


class NotIndependentError(CodeError):
    pass


class ZeroRowError(CodeError):
    pass


def _parity(v: int) -> int:
    return v.bit_count() & 1


@dataclass(frozen=True)
class PauliVec:
    """n-qubit Pauli modulo phase, stored as the pair of bit masks ``x`` and ``z``."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"qubit count must be non-negative, got {self.n}")
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise ValueError(f"x/z masks wider than n={self.n} bits")

    @classmethod
    def from_bits(cls, bits: int, n: int) -> "PauliVec":
        mask = (1 << n) - 1
        if bits >> (2 * n):
            raise ValueError(f"packed vector wider than 2n={2 * n} bits")
        return cls(n, bits & mask, bits >> n)

    @classmethod
    def from_string(cls, label: str) -> "PauliVec":
        """Parse ``"XIZY"``-style labels; character ``i`` acts on qubit ``i+1``."""
        x = z = 0
        for i, ch in enumerate(label):
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli character {ch!r} in {label!r}")
            if ch in "XY":
                x |= 1 << i
            if ch in "ZY":
                z |= 1 << i
        return cls(len(label), x, z)

    @property
    def bits(self) -> int:
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def __xor__(self, other: "PauliVec") -> "PauliVec":
        _check_same_n(self, other)
        return PauliVec(self.n, self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return "".join(
            _LABELS[((self.x >> i) & 1) | (((self.z >> i) & 1) << 1)] for i in range(self.n)
        )

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0


def _check_same_n(e: PauliVec, f: PauliVec) -> None:
    if e.n != f.n:
        raise ValueError(f"dimension mismatch: {e.n} vs {f.n} qubits")


def symplectic_product(e: PauliVec, f: PauliVec) -> int:
    """Return ``x.z' + z.x' mod 2``; zero iff the two Paulis commute."""
    _check_same_n(e, f)
    return ((e.x & f.z).bit_count() + (e.z & f.x).bit_count()) & 1


def _swap(e: PauliVec) -> int:
    # Packed vector whose plain dot product with f.bits is the symplectic product.
    return e.z | (e.x << e.n)


# ---------------------------------------------------------------------------
# F2 linear algebra on int rows
# ---------------------------------------------------------------------------


def _as_ints(rows: Iterable) -> list[int]:
    return [r.bits if isinstance(r, PauliVec) else int(r) for r in rows]


def _echelon(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Fully reduced echelon form; returns (rows, pivot bit positions)."""
    basis: list[int] = []
    pivots: list[int] = []
    for v in rows:
        for b, p in zip(basis, pivots):
            if (v >> p) & 1:
                v ^= b
        if v:
            p = v.bit_length() - 1
            for i, b in enumerate(basis):
                if (b >> p) & 1:
                    basis[i] = b ^ v
            basis.append(v)
            pivots.append(p)
    return basis, pivots


def rank(rows: Iterable) -> int:
    """F2 row rank of a matrix given as int or PauliVec rows."""
    return len(_echelon(_as_ints(rows))[0])


def row_reduce(rows: Iterable) -> tuple[int, ...]:
    """Canonical reduced row echelon form, rows sorted by descending pivot.

    Two matrices have equal output iff they span the same row space.
    """
    basis, _ = _echelon(_as_ints(rows))
    return tuple(sorted(basis, reverse=True))


def kernel_basis(rows: Iterable, m: int) -> list[int]:
    """Basis of ``{v in F2^m : row . v = 0 for every row}`` as m-bit ints."""
    basis, pivots = _echelon(_as_ints(rows))
    if any(b >> m for b in basis):
        raise ValueError(f"matrix rows wider than m={m} bits")
    pivot_set = set(pivots)
    out = []
    for c in range(m):
        if c in pivot_set:
            continue
        v = 1 << c
        for b, p in zip(basis, pivots):
            if (b >> c) & 1:
                v |= 1 << p
        out.append(v)
    return out


def solve_linear(rows: Sequence, rhs: int, m: int, rng: np.random.Generator | None = None) -> int | None:
    """Solve ``rows[i] . v = bit i of rhs`` over F2 for an m-bit vector v.

    Returns ``None`` when the system is inconsistent.  With ``rng`` the result
    is uniform over the affine solution space; without it the free variables
    are set to zero.
    """
    rows = _as_ints(rows)
    # rhs bit goes in position 0 so that it is never picked as a pivot
    # unless the coefficient part of the row vanished.
    aug = [(r << 1) | ((rhs >> i) & 1) for i, r in enumerate(rows)]
    basis, pivots = _echelon(aug)
    if 0 in pivots:
        return None
    free_mask = (1 << m) - 1
    for p in pivots:
        free_mask &= ~(1 << (p - 1))
    f = 0
    if rng is not None and free_mask:
        f = int.from_bytes(rng.bytes((m + 7) // 8), "little") & free_mask
    v = f
    for b, p in zip(basis, pivots):
        if (b & 1) ^ _parity((b >> 1) & f):
            v |= 1 << (p - 1)
    return v


# ---------------------------------------------------------------------------
# Tableau
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tableau:
    """Symplectic basis ``{H, G, LX, LZ}`` of F2^{2n}.

    ``H`` holds the stabilizer generators verbatim, ``G`` the pure errors
    (``<h_i, g_j> = delta_ij``), and ``LX``/``LZ`` paired logical operators.
    """

    n: int
    H: tuple[PauliVec, ...]
    G: tuple[PauliVec, ...]
    LX: tuple[PauliVec, ...]
    LZ: tuple[PauliVec, ...]

    @property
    def r(self) -> int:
        return len(self.H)

    @property
    def k(self) -> int:
        return len(self.LX)

    def rows(self) -> tuple[PauliVec, ...]:
        return self.H + self.G + self.LX + self.LZ

    def violations(self) -> list[str]:
        """Every broken pairing relation, as readable strings (empty if valid)."""
        out = []
        blocks = {"H": self.H, "G": self.G, "LX": self.LX, "LZ": self.LZ}
        # expected product: 1 only for the (H_i, G_i) and (LX_i, LZ_i) pairs
        partner = {("H", "G"), ("G", "H"), ("LX", "LZ"), ("LZ", "LX")}
        for n1, b1 in blocks.items():
            for n2, b2 in blocks.items():
                for i, u in enumerate(b1):
                    for j, v in enumerate(b2):
                        want = int((n1, n2) in partner and i == j)
                        if symplectic_product(u, v) != want:
                            out.append(f"<{n1}[{i}],{n2}[{j}]> != {want}")
        if len(self.rows()) != 2 * self.n or rank(self.rows()) != 2 * self.n:
            out.append("rows do not span F2^2n")
        return out


def check_generators(H: Sequence[PauliVec]) -> None:
    """Raise a :class:`CodeError` subclass naming the first offending row."""
    if not H:
        return
    n = H[0].n
    for i, h in enumerate(H):
        if h.n != n:
            raise ValueError(f"row {i} has {h.n} qubits, expected {n}")
        if h.is_identity():
            raise ZeroRowError(f"row {i} is the identity")
    for i in range(len(H)):
        for j in range(i):
            if symplectic_product(H[i], H[j]):
                raise NotCommutingError(f"rows {j} ({H[j]}) and {i} ({H[i]}) anticommute")
    seen: list[PauliVec] = []
    for i, h in enumerate(H):
        seen.append(h)
        if rank(seen) < len(seen):
            raise NotIndependentError(f"row {i} ({h}) is dependent on earlier rows")
    if len(H) > n:
        raise NotIndependentError(f"{len(H)} rows exceed n={n}")


def build_tableau(H: Sequence[PauliVec], n: int | None = None) -> Tableau:
    """Complete a commuting, independent generator set to a full tableau.

    Pure errors come from solving ``<h_j, g> = delta_ij`` and are then made
    mutually commuting by adding stabilizers.  Logicals are a symplectic
    Gram-Schmidt pass over the joint commutant of ``H`` and ``G``.
    """
    H = tuple(H)
    if n is None:
        if not H:
            raise ValueError("qubit count required for an empty generator set")
        n = H[0].n
    if any(h.n != n for h in H):
        raise ValueError(f"generator rows must all act on n={n} qubits")
    check_generators(H)
    m = 2 * n
    r = len(H)

    dual = [_swap(h) for h in H]
    G: list[PauliVec] = []
    for i in range(r):
        g = PauliVec.from_bits(solve_linear(dual, 1 << i, m), n)
        for j, gj in enumerate(G):
            if symplectic_product(gj, g):
                g = g ^ H[j]
        G.append(g)

    comm = kernel_basis(dual + [_swap(g) for g in G], m)
    pool = [PauliVec.from_bits(v, n) for v in comm]
    LX: list[PauliVec] = []
    LZ: list[PauliVec] = []
    while pool:
        lx = pool.pop(0)
        j = next(i for i, v in enumerate(pool) if symplectic_product(lx, v))
        lz = pool.pop(j)
        reduced = []
        for u in pool:
            if symplectic_product(u, lz):
                u = u ^ lx
            if symplectic_product(u, lx):
                u = u ^ lz
            reduced.append(u)
        pool = reduced
        LX.append(lx)
        LZ.append(lz)

    return Tableau(n, H, tuple(G), tuple(LX), tuple(LZ))


def decompose(e: PauliVec, T: Tableau) -> tuple[int, int, int, int]:
    """Coordinates ``(t, a, b, s)`` with ``e = tH + aLX + bLZ + sG``.

    Each coordinate is a bit-packed int; bit ``i`` selects row ``i`` of its
    block.  ``a`` is read against ``LZ`` and ``b`` against ``LX``.
    """
    if e.n != T.n:
        raise ValueError(f"dimension mismatch: {e.n} vs {T.n} qubits")
    t = sum(symplectic_product(e, g) << i for i, g in enumerate(T.G))
    s = sum(symplectic_product(e, h) << i for i, h in enumerate(T.H))
    a = sum(symplectic_product(e, lz) << i for i, lz in enumerate(T.LZ))
    b = sum(symplectic_product(e, lx) << i for i, lx in enumerate(T.LX))
    return t, a, b, s


def recompose(t: int, a: int, b: int, s: int, T: Tableau) -> PauliVec:
    for name, val, width in (("t", t, T.r), ("a", a, T.k), ("b", b, T.k), ("s", s, T.r)):
        if val < 0 or val >> width:
            raise ValueError(f"{name}={val} wider than {width} bits")
    bits = 0
    for coeffs, block in ((t, T.H), (a, T.LX), (b, T.LZ), (s, T.G)):
        for i, row in enumerate(block):
            if (coeffs >> i) & 1:
                bits ^= row.bits
    return PauliVec.from_bits(bits, T.n)
