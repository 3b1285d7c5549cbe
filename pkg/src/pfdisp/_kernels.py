"""Compiled inner loops for the DP solvers.

All solver-internal distance evaluations funnel through ``dist_alpha`` so
that table cells, closing reductions, backtracking rescans and the greedy
walk see bitwise-identical values (the generic-exponent pow may differ
from numpy's in the last ulp, so mixing pipelines inside one solve is not
allowed).  Kernels are compiled without fastmath and release the GIL, so
chunked thread execution is both parallel and bitwise deterministic.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NEG_INF = -math.inf

_JIT = dict(cache=True, nogil=True, fastmath=False)


@njit(**_JIT)
def dist_alpha(xs, ys, i, j, alpha):
    """Euclidean distance between points i and j, raised to alpha."""
    dx = xs[j] - xs[i]
    dy = ys[j] - ys[i]
    s = dx * dx + dy * dy
    if alpha == 1.0:
        return math.sqrt(s)
    if alpha == 2.0:
        return s
    if alpha == 0.5:
        return math.sqrt(math.sqrt(s))
    if alpha == 4.0:
        return s * s
    return s ** (alpha * 0.5)


@njit(**_JIT)
def fill_dists_from(xs, ys, i, lo, hi, alpha, out):
    """out[t] = d(i, lo + t) for the index range [lo, hi)."""
    for j in range(lo, hi):
        out[j - lo] = dist_alpha(xs, ys, i, j, alpha)


@njit(**_JIT)
def maxmin_layer_chunk(xs, ys, alpha, prev, k, i_lo, i_hi, out):
    """Bellman cells of row k for i in [i_lo, i_hi).

    Per cell: dichotomic search for the sign change of the increasing
    prev[j] - d(j, i) over j in [k-2, i-1], then the better of the two
    straddling candidates.
    """
    for i in range(i_lo, i_hi):
        a = k - 2
        b = i - 1
        while b - a >= 2:
            mid = (a + b) >> 1
            if prev[mid] > dist_alpha(xs, ys, mid, i, alpha):
                b = mid
            else:
                a = mid
        ca = min(prev[a], dist_alpha(xs, ys, a, i, alpha))
        cb = min(prev[b], dist_alpha(xs, ys, b, i, alpha))
        out[i] = ca if ca >= cb else cb


@njit(**_JIT)
def maxmin_p3_value(xs, ys, alpha):
    """Best 3-selection value: extremes fixed, one scan over the middle."""
    n = xs.size
    best = NEG_INF
    for m in range(1, n - 1):
        left = dist_alpha(xs, ys, 0, m, alpha)
        right = dist_alpha(xs, ys, m, n - 1, alpha)
        v = left if left < right else right
        if v > best:
            best = v
    return best


@njit(**_JIT)
def msn_row_chunk(xs, ys, alpha, prev, k, i_lo, i_hi, min_edge, out):
    """out[i] = max over j in [k-2, i-1] of prev[j] + d(j, i).

    Edges below min_edge are rejected (pass -inf to accept all).
    """
    for i in range(i_lo, i_hi):
        best = NEG_INF
        for j in range(k - 2, i):
            d = dist_alpha(xs, ys, j, i, alpha)
            if d >= min_edge:
                v = prev[j] + d
                if v > best:
                    best = v
        out[i] = best


@njit(**_JIT)
def msn_argmax_step(xs, ys, alpha, prev, j_lo, i, min_edge):
    """Best (value, j) extending a chain to i; smallest j wins ties."""
    best = NEG_INF
    arg = -1
    for j in range(j_lo, i):
        d = dist_alpha(xs, ys, j, i, alpha)
        if d >= min_edge:
            v = prev[j] + d
            if v > best:
                best = v
                arg = j
    return best, arg


@njit(**_JIT)
def msm_layer_chunk(xs, ys, alpha, prev, row_off, k, b_lo, b_hi, out):
    """Rows b in [b_lo, b_hi) of layer k+1 from layer k.

    For each new end-pair (b, c): max over a of prev[(a, b)] plus the now
    final contribution min(d(a, b), d(b, c)) of point b.  The predecessor
    scan is the full O(b) range.
    """
    n = xs.size
    a0 = k - 2
    u = np.empty(n)
    w = np.empty(n)
    for b in range(b_lo, b_hi):
        m = b - a0
        if m < 1:
            continue
        for t in range(m):
            a = a0 + t
            u[t] = prev[row_off[a] + b - a - 1]
            w[t] = dist_alpha(xs, ys, a, b, alpha)
        base = row_off[b] - (b + 1)
        for c in range(b + 1, n):
            v = dist_alpha(xs, ys, b, c, alpha)
            best = NEG_INF
            for t in range(m):
                e = w[t] if w[t] < v else v
                cand = u[t] + e
                if cand > best:
                    best = cand
            out[base + c] = best


@njit(**_JIT)
def msm_close(xs, ys, alpha, layer, row_off, p):
    """Add the last point's own contribution and take the best predecessor."""
    n = xs.size
    best = NEG_INF
    arg = -1
    for a in range(p - 2, n - 1):
        v = layer[row_off[a] + (n - 1) - a - 1] + dist_alpha(xs, ys, a, n - 1, alpha)
        if v > best:
            best = v
            arg = a
    return best, arg


@njit(**_JIT)
def msm_argmax_step(xs, ys, alpha, prev, row_off, k, i, i_next):
    """Best (value, a) for the pair (a, i) preceding (i, i_next)."""
    edge = dist_alpha(xs, ys, i, i_next, alpha)
    best = NEG_INF
    arg = -1
    for a in range(k - 3, i):
        w = dist_alpha(xs, ys, a, i, alpha)
        e = w if w < edge else edge
        v = prev[row_off[a] + i - a - 1] + e
        if v > best:
            best = v
            arg = a
    return best, arg


def warmup() -> None:
    """Force-compile every kernel (first call otherwise pays the JIT cost)."""
    xs = np.array([0.0, 1.0, 2.0, 3.0])
    ys = np.array([3.0, 2.0, 1.0, 0.0])
    prev = np.array([NEG_INF, 1.0, 2.0, 3.0])
    out = np.empty(4)
    row_off = np.array([0, 3, 5, 6], dtype=np.int64)
    tri = np.zeros(6)
    for alpha in (1.0, 2.0, 0.5, 3.0):
        dist_alpha(xs, ys, 0, 1, alpha)
    fill_dists_from(xs, ys, 0, 1, 4, 1.0, out[:3])
    maxmin_layer_chunk(xs, ys, 1.0, prev, 3, 2, 4, out)
    maxmin_p3_value(xs, ys, 1.0)
    msn_row_chunk(xs, ys, 1.0, prev, 3, 2, 4, NEG_INF, out)
    msn_argmax_step(xs, ys, 1.0, prev, 1, 3, NEG_INF)
    msm_layer_chunk(xs, ys, 1.0, tri, row_off, 2, 1, 3, tri.copy())
    msm_close(xs, ys, 1.0, tri, row_off, 2)
    msm_argmax_step(xs, ys, 1.0, tri, row_off, 3, 2, 3)
