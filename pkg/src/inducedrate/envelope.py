"""Grid evaluation, best-rate envelopes and improvement thresholds."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .channel import PauliDist, dist_from_total_p, hashing_bound
from .codes import canonical_key, canonical_string
from .induced import EntropySummary, evaluate
from .symplectic import PauliVec, Tableau, build_tableau

__all__ = [
    "EnvelopePoint",
    "ThresholdResult",
    "NoBracket",
    "RateCache",
    "CodeEval",
    "evaluate_grid",
    "build_envelope",
    "improvement_threshold",
    "CACHE_ENV_VAR",
]

log = logging.getLogger(__name__)

CACHE_ENV_VAR = "INDUCEDRATE_CACHE_DIR"

# p range of the published eta = 9 curves; used when no grid is given
DEFAULT_GRID = (0.2496778, 0.2708333, 50)


class NoBracket(ValueError):
    pass


class RateCache:
    """Entropy summaries keyed by (row space, channel).

    Held in memory; also mirrored to one JSON file per entry when a directory
    is given (or named by ``$INDUCEDRATE_CACHE_DIR``).  Concurrent writers of
    the same key store identical values, so last write wins.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get(CACHE_ENV_VAR) or None
        self.directory = Path(directory) if directory else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._mem: dict = {}
        self._lock = threading.Lock()

    @staticmethod
    def key(H: Sequence[PauliVec], dist: PauliDist, method: str = "auto"):
        # method is part of the key only for the explicit oracle paths
        return (canonical_key(H), dist.as_tuple(), method)

    def _path(self, key) -> Path:
        digest = hashlib.sha256(repr(key).encode()).hexdigest()
        return self.directory / f"{digest}.json"

    def get(self, key) -> EntropySummary | None:
        with self._lock:
            hit = self._mem.get(key)
        if hit is not None or self.directory is None:
            return hit
        path = self._path(key)
        if not path.exists():
            return None
        try:
            summary = EntropySummary(**json.loads(path.read_text()))
        except (OSError, ValueError, TypeError):
            return None
        with self._lock:
            self._mem[key] = summary
        return summary

    def put(self, key, summary: EntropySummary) -> None:
        with self._lock:
            self._mem[key] = summary
        if self.directory is not None:
            path = self._path(key)
            tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
            tmp.write_text(json.dumps(summary.__dict__))
            tmp.replace(path)

    def __len__(self) -> int:
        return len(self._mem)


@dataclass(frozen=True)
class CodeEval:
    """A candidate code prepared for evaluation."""

    H: tuple[PauliVec, ...]
    tableau: Tableau
    canonical: str

    @classmethod
    def from_rows(cls, H: Sequence[PauliVec]) -> "CodeEval":
        H = tuple(H)
        return cls(H, build_tableau(H), canonical_string(H))

    @property
    def n(self) -> int:
        return self.tableau.n

    @property
    def k(self) -> int:
        return self.tableau.k


def _prepare(codes) -> list[CodeEval]:
    return [c if isinstance(c, CodeEval) else CodeEval.from_rows(c) for c in codes]


def evaluate_grid(
    codes: Sequence,
    grid: Sequence[PauliDist],
    *,
    method: str = "auto",
    threads: int = 1,
    cache: RateCache | None = None,
) -> list[list[EntropySummary | Exception]]:
    """Exact entropy summaries for every (code, channel) pair.

    A cell whose evaluation fails holds the exception instead of a summary;
    the rest of the grid is still computed.  Rows follow ``codes``, columns
    follow ``grid``.
    """
    prepared = _prepare(codes)
    cache = cache if cache is not None else RateCache()

    def cell(args):
        code, dist = args
        key = RateCache.key(code.H, dist, method)
        hit = cache.get(key)
        if hit is not None:
            return hit
        try:
            summary = evaluate(code.tableau, dist, method)
        except (MemoryError, RuntimeError, ValueError) as exc:
            log.warning("evaluation failed for %s: %s", code.canonical, exc)
            return exc
        cache.put(key, summary)
        return summary

    jobs = [(code, dist) for code in prepared for dist in grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flat = list(pool.map(cell, jobs))
    else:
        flat = [cell(j) for j in jobs]
    width = len(grid)
    return [flat[i * width:(i + 1) * width] for i in range(len(prepared))]


@dataclass(frozen=True)
class EnvelopePoint:
    p: float
    dist: PauliDist
    R_hash: float
    R_ind_best: float | None = None
    best_code: str | None = None
    n: int | None = None
    k: int | None = None
    H_L_given_S: float | None = None

    @property
    def improved(self) -> bool:
        return self.R_ind_best is not None and self.R_ind_best - self.R_hash > 0

    @property
    def q_X(self) -> float:
        return self.dist.p_X + self.dist.p_Y

    @property
    def q_Z(self) -> float:
        return self.dist.p_Z + self.dist.p_Y


def _rank_key(code: CodeEval, summary: EntropySummary):
    # best rate first; ties go to smaller n, then larger k, then smallest encoding
    return (-summary.R_ind, code.n, -code.k, code.canonical)


def build_envelope(
    codes: Sequence,
    grid: Sequence[PauliDist],
    ps: Sequence[float] | None = None,
    *,
    method: str = "auto",
    threads: int = 1,
    cache: RateCache | None = None,
) -> list[EnvelopePoint]:
    """Best induced rate per grid point, alongside the physical hashing bound.

    ``ps`` labels the grid points (defaults to ``1 - p_I``).  No baseline is
    folded into ``R_ind_best``; points without any evaluated code carry
    ``None``.
    """
    prepared = _prepare(codes)
    if ps is None:
        ps = [d.total_error for d in grid]
    table = evaluate_grid(prepared, grid, method=method, threads=threads, cache=cache)
    points = []
    for j, (p, dist) in enumerate(zip(ps, grid)):
        best = None
        for code, row in zip(prepared, table):
            summary = row[j]
            if isinstance(summary, Exception):
                continue
            cand = (_rank_key(code, summary), code, summary)
            if best is None or cand[0] < best[0]:
                best = cand
        if best is None:
            points.append(EnvelopePoint(p=p, dist=dist, R_hash=hashing_bound(dist)))
            continue
        _, code, summary = best
        points.append(
            EnvelopePoint(
                p=p,
                dist=dist,
                R_hash=hashing_bound(dist),
                R_ind_best=summary.R_ind,
                best_code=code.canonical,
                n=code.n,
                k=code.k,
                H_L_given_S=summary.H_L_given_S,
            )
        )
    return points


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    k: int
    code: str
    p_star: float
    bracket: float


def improvement_threshold(
    H: Sequence[PauliVec],
    eta: float,
    p_lo: float,
    p_hi: float,
    tol: float = 1e-9,
    method: str = "auto",
) -> ThresholdResult:
    """Bisect for the ``p`` where ``R_ind - R_hash`` changes sign.

    ``[p_lo, p_hi]`` must straddle exactly the crossing of interest; the
    returned ``p_star`` is the midpoint of the final bracket of width
    ``<= tol``.
    """
    code = H if isinstance(H, CodeEval) else CodeEval.from_rows(H)

    def gap(p: float) -> float:
        dist = dist_from_total_p(p, eta)
        return evaluate(code.tableau, dist, method).R_ind - hashing_bound(dist)

    lo, hi = float(p_lo), float(p_hi)
    f_lo, f_hi = gap(lo), gap(hi)
    if (f_lo > 0) == (f_hi > 0):
        raise NoBracket(
            f"R_ind - R_hash has the same sign at p={lo} ({f_lo:.3e}) and p={hi} ({f_hi:.3e})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = gap(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return ThresholdResult(n=code.n, k=code.k, code=code.canonical, p_star=0.5 * (lo + hi), bracket=hi - lo)
