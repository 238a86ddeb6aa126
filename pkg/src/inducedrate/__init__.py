"""Stabilizer codes as channel transforms for memoryless Pauli channels.

Computes the induced logical-error/syndrome distribution of a stabilizer
code, the resulting hashing rate with decoder side information, and searches
small codes for rates above the baseline hashing bound.
"""
from .channel import PauliDist, dist_from_total_p, hashing_bound, pattern_prob, skewed_dist
from .codes import all_z, parse_code, render_code, z_repetition
from .envelope import build_envelope, evaluate_grid, improvement_threshold
from .induced import (
    EntropySummary,
    InducedJoint,
    apply_correction,
    evaluate,
    induced_joint_dense,
    induced_joint_streaming,
    summarize,
)
from .search import SearchConfig, StandardFormShape, dfs_enumerate, n_free, random_candidate, sweep
from .symplectic import PauliVec, Tableau, build_tableau, decompose, recompose, symplectic_product

__version__ = "0.1.0"

__all__ = [
    "PauliVec", "Tableau", "build_tableau", "decompose", "recompose", "symplectic_product",
    "PauliDist", "skewed_dist", "dist_from_total_p", "pattern_prob", "hashing_bound",
    "InducedJoint", "EntropySummary", "induced_joint_dense", "induced_joint_streaming",
    "summarize", "apply_correction", "evaluate",
    "StandardFormShape", "SearchConfig", "n_free", "dfs_enumerate", "random_candidate", "sweep",
    "evaluate_grid", "build_envelope", "improvement_threshold",
    "parse_code", "render_code", "all_z", "z_repetition",
]
