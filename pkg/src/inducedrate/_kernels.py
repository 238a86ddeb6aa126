"""Compiled inner loop for streaming coset entropy."""
from __future__ import annotations

import math
import warnings

warnings.filterwarnings("ignore", message="The TBB threading layer")

import numba as nb  # noqa: E402
import numpy as np  # noqa: E402

# TBB in this image is too old for numba; OpenMP is safe for concurrent callers.
if nb.config.THREADING_LAYER == "default":
    nb.config.THREADING_LAYER = "omp"


def set_threads(count: int) -> int:
    """Cap the kernel's worker threads; returns the count actually used."""
    count = max(1, min(int(count), nb.config.NUMBA_NUM_THREADS))
    nb.set_num_threads(count)
    return count


@nb.njit(cache=True, nogil=True)
def _stream_block(j0, j1, p_hi, p_lo, s_hi, s_lo, t_hi, t_lo, shift, n_syn, tiny):
    # Patterns are split as (hi index j, lo index i); the coset of (j, i) is
    # {(j ^ t_hi[t], i ^ t_lo[t])} and is counted only at its smallest key.
    n_lo = p_lo.shape[0]
    n_t = t_hi.shape[0]
    h_sum = 0.0
    h_comp = 0.0
    syn = np.zeros(n_syn)
    syn_comp = np.zeros(n_syn)
    syn_inner = np.zeros(n_syn)
    for j in range(j0, j1):
        sh = s_hi[j]
        ph = p_hi[j]
        inner = 0.0
        syn_inner[:] = 0.0
        for i in range(n_lo):
            key = (j << shift) | i
            rep = True
            for t in range(1, n_t):
                if (((j ^ t_hi[t]) << shift) | (i ^ t_lo[t])) < key:
                    rep = False
                    break
            if not rep:
                continue
            prob = ph * p_lo[i]
            for t in range(1, n_t):
                prob += p_hi[j ^ t_hi[t]] * p_lo[i ^ t_lo[t]]
            if prob > tiny:
                inner -= prob * math.log(prob)
                syn_inner[sh ^ s_lo[i]] += prob
        y = inner - h_comp
        tot = h_sum + y
        h_comp = (tot - h_sum) - y
        h_sum = tot
        for s in range(n_syn):
            y = syn_inner[s] - syn_comp[s]
            tot = syn[s] + y
            syn_comp[s] = (tot - syn[s]) - y
            syn[s] = tot
    return h_sum / math.log(2.0), syn


@nb.njit(cache=True, nogil=True, parallel=True)
def stream_coset_entropy(bounds, p_hi, p_lo, s_hi, s_lo, t_hi, t_lo, shift, n_syn, tiny):
    """Per-block joint entropy (bits) and syndrome marginals.

    ``bounds`` fixes the block partition of the hi range, so the output does
    not depend on how many threads run the blocks.
    """
    n_blocks = bounds.shape[0] - 1
    h_out = np.zeros(n_blocks)
    syn_out = np.zeros((n_blocks, n_syn))
    for c in nb.prange(n_blocks):
        h, syn = _stream_block(
            bounds[c], bounds[c + 1], p_hi, p_lo, s_hi, s_lo, t_hi, t_lo, shift, n_syn, tiny
        )
        h_out[c] = h
        syn_out[c, :] = syn
    return h_out, syn_out
