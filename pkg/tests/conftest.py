from __future__ import annotations

import numpy as np
import pytest

from inducedrate.channel import PauliDist, dist_from_total_p, skewed_dist
from inducedrate.search import StandardFormShape, dfs_enumerate, n_free
from inducedrate.symplectic import PauliVec

P = PauliVec.from_string


def rows(*labels: str) -> tuple[PauliVec, ...]:
    return tuple(P(s) for s in labels)


# three channel points used for cross-checking evaluators
CHANNEL_POINTS = [
    dist_from_total_p(0.26, 9.0),
    skewed_dist(0.07, 0.2),
    PauliDist(0.7, 0.05, 0.15, 0.1),
]


def dfs_codes(n_max: int, T: int = 10**6):
    """Every code the exhaustive enumeration emits for 2 <= n <= n_max."""
    out = []
    for n in range(2, n_max + 1):
        for k in range(1, n):
            for r_x in range(n - k + 1):
                shape = StandardFormShape(n, k, r_x)
                if (1 << n_free(shape)) <= T:
                    out.extend(dfs_enumerate(shape, T))
    return out


@pytest.fixture(scope="session")
def dfs_codes_n4():
    return dfs_codes(4)


def brute_force_standard_forms(shape: StandardFormShape) -> set[tuple[tuple[int, int], ...]]:
    """All commuting fillings of ``shape`` as tuples of packed ``(x, z)`` rows.

    Vectorised over every filling at once; shares nothing with the search code
    beyond the block layout itself.
    """
    n, k, rx, rz = shape.n, shape.k, shape.r_x, shape.r_z
    r = rx + rz
    sizes = [(rx, rz), (rx, k), (rx, rx), (rx, rz), (rx, k), (rz, rx), (rz, k)]
    total = sum(a * b for a, b in sizes)
    f = np.arange(1 << total, dtype=np.int64)
    bits = ((f[:, None] >> np.arange(total)) & 1).astype(np.uint8)
    blocks, pos = [], 0
    for a, b in sizes:
        blocks.append(bits[:, pos : pos + a * b].reshape(len(f), a, b))
        pos += a * b
    a1, a2, b_, c1, c2, d, e = blocks
    m = len(f)
    X = np.zeros((m, r, n), np.uint8)
    Z = np.zeros((m, r, n), np.uint8)
    X[:, :rx, :rx] = np.eye(rx, dtype=np.uint8)
    X[:, :rx, rx : rx + rz] = a1
    X[:, :rx, rx + rz :] = a2
    Z[:, :rx, :rx] = b_
    Z[:, :rx, rx : rx + rz] = c1
    Z[:, :rx, rx + rz :] = c2
    Z[:, rx:, :rx] = d
    Z[:, rx:, rx : rx + rz] = np.eye(rz, dtype=np.uint8)
    Z[:, rx:, rx + rz :] = e
    # uint8 sums may wrap, but wrapping mod 256 keeps the parity
    gram = (np.einsum("mij,mkj->mik", X, Z) + np.einsum("mij,mkj->mik", Z, X)) & 1
    ok = ~gram.any(axis=(1, 2))
    weights = 1 << np.arange(n, dtype=np.int64)
    xs = (X[ok].astype(np.int64) * weights).sum(-1)
    zs = (Z[ok].astype(np.int64) * weights).sum(-1)
    return {tuple(zip(map(int, xr), map(int, zr))) for xr, zr in zip(xs, zs)}


def as_pairs(H) -> tuple[tuple[int, int], ...]:
    return tuple((h.x, h.z) for h in H)


def all_patterns(n: int):
    for bits in range(1 << (2 * n)):
        yield PauliVec.from_bits(bits, n)


def random_pauli(rng: np.random.Generator, n: int) -> PauliVec:
    return PauliVec(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))


def permute_qubits(H, perm):
    """Apply the same column permutation to X and Z halves."""
    out = []
    for h in H:
        x = sum(((h.x >> q) & 1) << int(perm[q]) for q in range(h.n))
        z = sum(((h.z >> q) & 1) << int(perm[q]) for q in range(h.n))
        out.append(PauliVec(h.n, x, z))
    return tuple(out)


__all__ = ["P", "rows", "CHANNEL_POINTS", "dfs_codes", "brute_force_standard_forms", "as_pairs", "all_patterns", "random_pauli", "permute_qubits"]
