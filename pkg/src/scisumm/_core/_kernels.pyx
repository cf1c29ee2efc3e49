# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: directional min-distance sums and LCS length."""

import numpy as np

from libc.stdint cimport uint64_t


def rwmd_directional_sums(double[:, ::1] dist,
                          int[::1] a_ids, double[::1] a_counts, int[::1] a_offsets,
                          int[::1] b_ids, int[::1] b_offsets):
    """Sum, per sentence pair, the nearest-token distances from side A to B.

    ``R[i, j]`` is the sum over tokens of A-sentence ``i`` (weighted by their
    occurrence counts) of the minimum distance to any token of B-sentence
    ``j``. Sentences are CSR-style slices into the id arrays; ids index the
    rows/columns of ``dist``. Empty sentences yield 0.0 rows or columns and
    callers are expected to mask them.

    The nearest-token distance from each A-vocabulary entry to each
    B-sentence is computed once and reused across A-sentences, so the cost
    is O(va * n * tokens_b + m * n * tokens_a) rather than quadratic in
    both token counts per pair.
    """
    cdef Py_ssize_t m = a_offsets.shape[0] - 1
    cdef Py_ssize_t n = b_offsets.shape[0] - 1
    out = np.zeros((m, n), dtype=np.float64)
    cdef double[:, ::1] R = out
    cdef Py_ssize_t va = dist.shape[0]
    if m == 0 or n == 0 or va == 0 or dist.shape[1] == 0:
        return out
    near_arr = np.zeros((va, n), dtype=np.float64)
    cdef double[:, ::1] nearest = near_arr
    cdef Py_ssize_t i, j, p, q, row, lo, hi
    cdef double best, d, total
    for row in range(va):
        for j in range(n):
            lo = b_offsets[j]
            hi = b_offsets[j + 1]
            if hi <= lo:
                continue
            best = dist[row, b_ids[lo]]
            for q in range(lo + 1, hi):
                d = dist[row, b_ids[q]]
                if d < best:
                    best = d
            nearest[row, j] = best
    for i in range(m):
        for j in range(n):
            total = 0.0
            for p in range(a_offsets[i], a_offsets[i + 1]):
                total += a_counts[p] * nearest[a_ids[p], j]
            R[i, j] = total
    return out


cdef inline uint64_t popcount64(uint64_t x) nogil:
    x = x - ((x >> 1) & <uint64_t>0x5555555555555555)
    x = (x & <uint64_t>0x3333333333333333) + ((x >> 2) & <uint64_t>0x3333333333333333)
    x = (x + (x >> 4)) & <uint64_t>0x0F0F0F0F0F0F0F0F
    return (x * <uint64_t>0x0101010101010101) >> 56


def lcs_length(int[::1] a, int[::1] b):
    """Length of the longest common subsequence of two id sequences.

    Bit-parallel formulation: each 64-bit word carries a slice of the DP
    row, so the cost is O(len(a) * len(b) / 64). Symbols are compacted to
    a dense range first so the per-symbol bit masks live in one array.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = b.shape[0]
    if m == 0 or n == 0:
        return 0
    merged = np.concatenate([np.asarray(a), np.asarray(b)])
    _, inverse = np.unique(merged, return_inverse=True)
    compact = np.ascontiguousarray(inverse, dtype=np.int64)
    cdef long long[::1] ids = compact
    cdef Py_ssize_t k = int(compact.max()) + 1
    cdef Py_ssize_t words = (m + 63) >> 6

    mask_arr = np.zeros((k, words), dtype=np.uint64)
    cdef uint64_t[:, ::1] masks = mask_arr
    cdef Py_ssize_t i, w
    for i in range(m):
        masks[ids[i], i >> 6] |= (<uint64_t>1) << (i & 63)

    row_arr = np.full(words, <uint64_t>0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    cdef uint64_t[::1] v = row_arr
    cdef Py_ssize_t tail = m & 63
    if tail:
        v[words - 1] = ((<uint64_t>1) << tail) - 1

    cdef Py_ssize_t sym
    cdef uint64_t vw, uw, s, carry, c_out
    for i in range(m, m + n):
        sym = ids[i]
        carry = 0
        for w in range(words):
            vw = v[w]
            uw = vw & masks[sym, w]
            # (v + u) can carry across words; (v - u) cannot borrow since
            # every bit of u is also set in v
            s = vw + uw
            c_out = 1 if s < vw else 0
            s = s + carry
            if s < carry:
                c_out = 1
            v[w] = s | (vw - uw)
            carry = c_out
    if tail:
        v[words - 1] &= ((<uint64_t>1) << tail) - 1

    cdef uint64_t remaining = 0
    for w in range(words):
        remaining += popcount64(v[w])
    return m - <int>remaining
