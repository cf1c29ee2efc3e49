"""Pure NumPy / pure Python fallbacks for the compiled kernels.

Results agree with the compiled module up to floating-point reassociation
for the distance sums, and exactly for the integer LCS length.
"""

from __future__ import annotations

import numpy as np


def rwmd_directional_sums(dist, a_ids, a_counts, a_offsets, b_ids, b_offsets):
    """Sum, per sentence pair, the nearest-token distances from side A to B.

    Same contract as the compiled version: ``R[i, j]`` sums, over tokens of
    A-sentence ``i`` weighted by occurrence counts, the minimum distance to
    any token of B-sentence ``j``. Empty sentences produce zero rows/columns.
    """
    m = len(a_offsets) - 1
    n = len(b_offsets) - 1
    R = np.zeros((m, n))
    if m == 0 or n == 0 or dist.shape[0] == 0 or dist.shape[1] == 0:
        return R
    # nearest[v, j]: distance from A-vocabulary token v to the closest token
    # of B-sentence j
    nearest = np.full((dist.shape[0], n), np.inf)
    for j in range(n):
        lo, hi = b_offsets[j], b_offsets[j + 1]
        if hi > lo:
            nearest[:, j] = dist[:, b_ids[lo:hi]].min(axis=1)
    for i in range(m):
        lo, hi = a_offsets[i], a_offsets[i + 1]
        if hi > lo:
            R[i, :] = a_counts[lo:hi] @ nearest[a_ids[lo:hi], :]
    empty_b = np.asarray(b_offsets[1:]) == np.asarray(b_offsets[:-1])
    if empty_b.any():
        R[:, empty_b] = 0.0
    return R


def lcs_length(a, b):
    """Length of the longest common subsequence of two id sequences.

    Bit-parallel formulation: one arbitrary-precision integer carries a DP
    row, so the cost is O(len(a) * len(b) / wordsize).
    """
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    m = len(a)
    if m == 0 or len(b) == 0:
        return 0
    masks: dict[int, int] = {}
    for pos, sym in enumerate(a):
        masks[sym] = masks.get(sym, 0) | (1 << pos)
    full = (1 << m) - 1
    v = full
    for sym in b:
        p = masks.get(sym, 0)
        u = v & p
        v = ((v + u) | (v - u)) & full
    return m - v.bit_count()
