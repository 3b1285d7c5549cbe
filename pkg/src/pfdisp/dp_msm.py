"""Exact Max-Sum-Min p-dispersion on a sorted front.

State: V_k[(a, b)] is the best nearest-neighbour-sum over selections of k
points starting at point 0 and ending with the consecutive pair (a, b),
counting every point's contribution except the trailing point b, whose
nearest selected neighbour is not yet known.  Extending by c finalizes b's
contribution min(d(a, b), d(b, c)); closing at the last front point adds
its own contribution d(a, n-1).  Layers are triangular (a < b) and the
inner maximization scans all predecessors: O(p n^3) time, O(p n^2) space
(two live layers in value-only mode).

Small p is cheaper by fixing the extremes and enumerating the middles
directly: one/two/three nested scans for p = 3, 4, 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _kernels
from .core import (
    DispersionParams,
    InfeasibleParameterError,
    SortedFront,
    dist,
    dists_from,
)
from .oracle import Selection, SolveMethod, Variant, dispersion_cost
from .parallel import CellTracker, chunk_ranges, run_layer_chunks

__all__ = ["MsmTable", "solve", "solve_value_only"]

NEG_INF = -math.inf

B_CHUNK = 64  # rows of fixed b per parallel chunk


def _row_offsets(n: int) -> np.ndarray:
    """Start of row a in the flattened upper triangle {(a, b): a < b}."""
    a = np.arange(n, dtype=np.int64)
    return a * (n - 1) - (a * (a - 1)) // 2


def _column_positions(row_off: np.ndarray, b: int, a_lo: int = 0) -> np.ndarray:
    """Flat positions of cells (a, b) for a in [a_lo, b)."""
    aa = np.arange(a_lo, b, dtype=np.int64)
    return row_off[a_lo:b] + (b - 1) - aa


@dataclass(frozen=True)
class MsmTable:
    """Triangular value layers k = 2 .. k_max over end-pairs (a, b)."""

    n: int
    layers: Dict[int, np.ndarray]
    row_off: np.ndarray

    def cell(self, k: int, a: int, b: int) -> float:
        return float(self.layers[k][self.row_off[a] + b - a - 1])


def _initial_layer(front: SortedFront, params: DispersionParams, row_off: np.ndarray) -> np.ndarray:
    """Layer 2: pairs (0, b) carry point 0's contribution d(0, b)."""
    n = front.n
    layer = np.full(n * (n - 1) // 2, NEG_INF)
    _kernels.fill_dists_from(front.xs, front.ys, 0, 1, n, params.alpha, layer[: n - 1])
    return layer


def _next_layer(
    front: SortedFront,
    row_off: np.ndarray,
    prev: np.ndarray,
    k: int,
    params: DispersionParams,
    threads: int,
) -> np.ndarray:
    """Layer k+1 from layer k; the parallel grain is rows of fixed b."""
    out = np.full(prev.shape, NEG_INF)
    n = front.n
    chunks = chunk_ranges(k - 1, n - 1, B_CHUNK)
    run_layer_chunks(
        lambda lo, hi: _kernels.msm_layer_chunk(
            front.xs, front.ys, params.alpha, prev, row_off, k, lo, hi, out
        ),
        chunks,
        threads,
    )
    return out


def _close(
    front: SortedFront,
    row_off: np.ndarray,
    final_layer: np.ndarray,
    p: int,
    params: DispersionParams,
) -> Tuple[float, int]:
    """Add the last point's own contribution d(a, n-1) and take the best a."""
    opt, a_star = _kernels.msm_close(
        front.xs, front.ys, params.alpha, final_layer, row_off, p
    )
    return float(opt), int(a_star)


def _backtrack(
    front: SortedFront,
    table: MsmTable,
    p: int,
    a_star: int,
    params: DispersionParams,
) -> Tuple[int, ...]:
    """Rescan each layer's argmax (smallest predecessor on ties)."""
    picks = [front.n - 1, a_star]
    i, i_next = a_star, front.n - 1
    for k in range(p, 2, -1):
        val, a = _kernels.msm_argmax_step(
            front.xs, front.ys, params.alpha, table.layers[k - 1], table.row_off, k, i, i_next
        )
        assert val == table.cell(k, i, i_next), "backtrack must reproduce the stored cell"
        i, i_next = int(a), i
        picks.append(i)
    assert picks[-1] == 0, "chains start at the first front point"
    return tuple(reversed(picks))


def _check_p(front: SortedFront, p: int) -> None:
    if not 2 <= p <= front.n:
        raise InfeasibleParameterError(f"p must be in [2, {front.n}], got {p}")


def _fast_small_p(front: SortedFront, p: int, params: DispersionParams) -> Tuple[float, Tuple[int, ...]]:
    """Extreme-fixed enumeration of the 1..3 middle points (p = 3, 4, 5)."""
    n = front.n
    alpha = params.alpha
    last = n - 1
    if p == 3:
        mids = np.arange(1, last)
        g1 = dists_from(front, 0, mids, alpha)
        g2 = dists_from(front, last, mids, alpha)
        cost = g1 + np.minimum(g1, g2) + g2
        t = int(np.argmax(cost))
        return float(cost[t]), (0, int(mids[t]), last)
    best = -math.inf
    best_idx: Tuple[int, ...] = ()
    if p == 4:
        for m1 in range(1, last - 1):
            m2 = np.arange(m1 + 1, last)
            g1 = dist(front, 0, m1, params)
            g2 = dists_from(front, m1, m2, alpha)
            g3 = dists_from(front, last, m2, alpha)
            cost = g1 + np.minimum(g1, g2) + np.minimum(g2, g3) + g3
            t = int(np.argmax(cost))
            if cost[t] > best:
                best = float(cost[t])
                best_idx = (0, m1, int(m2[t]), last)
        return best, best_idx
    assert p == 5
    for m1 in range(1, last - 2):
        g1 = dist(front, 0, m1, params)
        for m2 in range(m1 + 1, last - 1):
            m3 = np.arange(m2 + 1, last)
            g2 = dist(front, m1, m2, params)
            g3 = dists_from(front, m2, m3, alpha)
            g4 = dists_from(front, last, m3, alpha)
            cost = g1 + min(g1, g2) + np.minimum(g2, g3) + np.minimum(g3, g4) + g4
            t = int(np.argmax(cost))
            if cost[t] > best:
                best = float(cost[t])
                best_idx = (0, m1, m2, int(m3[t]), last)
    return best, best_idx


def solve(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
    fast_paths: bool = True,
) -> Selection:
    """Optimal Max-Sum-Min p-dispersion (anchored at both extremes)."""
    n = front.n
    _check_p(front, p)
    if fast_paths:
        if p == 2:
            cost = 2.0 * dist(front, 0, n - 1, params)
            return Selection(Variant.MAX_SUM_MIN, p, (0, n - 1), cost, SolveMethod.DP)
        if p == n:
            idx = tuple(range(n))
            cost = dispersion_cost(front, idx, Variant.MAX_SUM_MIN, params)
            return Selection(Variant.MAX_SUM_MIN, p, idx, cost, SolveMethod.DP)
        if p in (3, 4, 5):
            cost, idx = _fast_small_p(front, p, params)
            return Selection(Variant.MAX_SUM_MIN, p, idx, cost, SolveMethod.DP)
    row_off = _row_offsets(n)
    tri = n * (n - 1) // 2
    layers = {2: _initial_layer(front, params, row_off)}
    if tracker:
        tracker.alloc(tri)
    for k in range(2, p):
        layers[k + 1] = _next_layer(front, row_off, layers[k], k, params, threads)
        if tracker:
            tracker.alloc(tri)
    table = MsmTable(n, layers, row_off)
    opt, a_star = _close(front, row_off, layers[p], p, params)
    indices = _backtrack(front, table, p, a_star, params)
    if tracker:
        tracker.free(len(layers) * tri)
    return Selection(Variant.MAX_SUM_MIN, p, indices, opt, SolveMethod.DP)


def solve_value_only(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
    fast_paths: bool = True,
) -> float:
    """Optimal value with two live layers only."""
    n = front.n
    _check_p(front, p)
    if fast_paths:
        if p == 2:
            return 2.0 * dist(front, 0, n - 1, params)
        if p == n:
            return dispersion_cost(front, tuple(range(n)), Variant.MAX_SUM_MIN, params)
        if p in (3, 4, 5):
            return _fast_small_p(front, p, params)[0]
    row_off = _row_offsets(n)
    tri = n * (n - 1) // 2
    layer = _initial_layer(front, params, row_off)
    if tracker:
        tracker.alloc(tri)
    for k in range(2, p):
        nxt = _next_layer(front, row_off, layer, k, params, threads)
        if tracker:
            tracker.alloc(tri)
            tracker.free(tri)
        layer = nxt
    opt, _ = _close(front, row_off, layer, p, params)
    if tracker:
        tracker.free(tri)
    return opt
