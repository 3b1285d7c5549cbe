"""Exact Max-Min p-dispersion on a sorted front.

The Bellman table row k holds, for each i, the best Max-Min value over
selections of k points from the first i+1 points.  On a sorted front the
inner maximization max_j min(row[j], d(j, i)) is over the minimum of an
increasing and a strictly decreasing sequence, so each cell is found by a
dichotomic search for their crossing.  Only two rows are ever live; the
solution is recovered afterwards by a greedy walk that needs nothing but
the optimal value.  Total cost: O(p n log n) time, O(n) space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernels
from .core import (
    DispersionParams,
    InfeasibleParameterError,
    SortedFront,
    consecutive_dists,
    dist,
)
from .oracle import Selection, SolveMethod, Variant
from .parallel import CellTracker, chunk_ranges, run_layer_chunks

__all__ = [
    "DPLayer",
    "IndexBounds",
    "InconsistentOptimumError",
    "bellman_cell",
    "compute_layer",
    "initial_layer",
    "solve",
    "backtrack_greedy",
    "index_bounds",
]

NEG_INF = -math.inf

# cells per parallel chunk; chunks are scheduled widest-first
LAYER_CHUNK = 1 << 16

MIN_INDEXES = "min-indexes"
MAX_INDEXES = "max-indexes"


class InconsistentOptimumError(RuntimeError):
    """The greedy walk could not place p points at the claimed optimum."""


@dataclass(frozen=True)
class DPLayer:
    """One row of the Bellman table; -inf marks infeasible cells (i < k-1)."""

    k: int
    values: np.ndarray


@dataclass(frozen=True)
class IndexBounds:
    """Componentwise index bounds on extreme-anchored optimal selections."""

    lower: Tuple[int, ...]
    upper: Tuple[int, ...]


def initial_layer(front: SortedFront, params: DispersionParams) -> DPLayer:
    """Row k=2: the best 2-selection ending at i always picks points 0 and i."""
    n = front.n
    values = np.empty(n, dtype=np.float64)
    values[0] = NEG_INF
    _kernels.fill_dists_from(front.xs, front.ys, 0, 1, n, params.alpha, values[1:])
    return DPLayer(2, values)


def bellman_cell(prev: DPLayer, i: int, k: int, front: SortedFront, params: DispersionParams) -> float:
    """One cell of row k by dichotomic search over j in [k-2, i-1].

    phi(j) = prev[j] - d(j, i) is increasing, so min(prev[j], d(j, i))
    peaks where phi changes sign; the search narrows to the two straddling
    candidates and returns the better one.
    """
    if k < 3:
        raise ValueError("bellman_cell applies to rows k >= 3")
    a = k - 2
    b = i - 1
    if b < a:
        return NEG_INF
    vals = prev.values
    while b - a >= 2:
        mid = (a + b) >> 1
        if vals[mid] > dist(front, mid, i, params):
            b = mid
        else:
            a = mid
    ca = min(float(vals[a]), dist(front, a, i, params))
    cb = min(float(vals[b]), dist(front, b, i, params))
    return ca if ca >= cb else cb


def compute_layer(
    front: SortedFront,
    prev: DPLayer,
    params: DispersionParams,
    threads: int = 1,
) -> DPLayer:
    """Next Bellman row from the previous one; cells are independent.

    Chunks are scheduled widest search range first (highest i) for load
    balance; the join before returning is the inter-row barrier.
    """
    k = prev.k + 1
    n = front.n
    out = np.empty(n, dtype=np.float64)
    out[: min(k - 1, n)] = NEG_INF
    if k - 1 < n:
        chunks = chunk_ranges(k - 1, n, LAYER_CHUNK, descending=True)
        run_layer_chunks(
            lambda lo, hi: _kernels.maxmin_layer_chunk(
                front.xs, front.ys, params.alpha, prev.values, k, lo, hi, out
            ),
            chunks,
            threads,
        )
        feasible = out[k - 1 :]
        assert (np.diff(feasible) >= 0).all(), "Bellman row must be nondecreasing"
    return DPLayer(k, out)


def _bisect_smallest_ge(front: SortedFront, m: int, opt: float, params: DispersionParams) -> Optional[int]:
    """Smallest M in (m, n-1] with d(m, M) >= opt; None if no such index."""
    xs, ys, alpha = front.xs, front.ys, params.alpha
    n = front.n
    if _kernels.dist_alpha(xs, ys, m, n - 1, alpha) < opt:
        return None
    lo, hi = m + 1, n - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if _kernels.dist_alpha(xs, ys, m, mid, alpha) >= opt:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _bisect_biggest_ge(front: SortedFront, M: int, opt: float, params: DispersionParams) -> Optional[int]:
    """Biggest m in [0, M) with d(m, M) >= opt; None if no such index."""
    xs, ys, alpha = front.xs, front.ys, params.alpha
    if _kernels.dist_alpha(xs, ys, 0, M, alpha) < opt:
        return None
    lo, hi = 0, M - 1
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if _kernels.dist_alpha(xs, ys, mid, M, alpha) >= opt:
            lo = mid
        else:
            hi = mid - 1
    return lo


def backtrack_greedy(
    front: SortedFront,
    p: int,
    opt_value: float,
    params: DispersionParams,
    direction: str = MIN_INDEXES,
) -> Tuple[int, ...]:
    """Recover an optimal selection from the optimal value alone.

    Walks from one extreme placing each next point at the closest index
    whose distance to the previous pick is still >= opt_value (dichotomic
    step).  With the exact optimum this always closes the walk at the other
    extreme; otherwise InconsistentOptimumError is raised.
    """
    n = front.n
    if not 2 <= p <= n:
        raise InfeasibleParameterError(f"p must be in [2, {n}], got {p}")
    if direction not in (MIN_INDEXES, MAX_INDEXES):
        raise ValueError(f"unknown direction {direction!r}")
    if direction == MIN_INDEXES:
        picks = [0]
        for _ in range(p - 2):
            nxt = _bisect_smallest_ge(front, picks[-1], opt_value, params)
            if nxt is None or nxt >= n - 1:
                raise InconsistentOptimumError(
                    f"cannot place {p} points at spacing {opt_value}"
                )
            picks.append(nxt)
        if _kernels.dist_alpha(front.xs, front.ys, picks[-1], n - 1, params.alpha) < opt_value:
            raise InconsistentOptimumError(
                f"walk does not close at spacing {opt_value}"
            )
        picks.append(n - 1)
        return tuple(picks)
    picks = [n - 1]
    for _ in range(p - 2):
        prv = _bisect_biggest_ge(front, picks[-1], opt_value, params)
        if prv is None or prv <= 0:
            raise InconsistentOptimumError(
                f"cannot place {p} points at spacing {opt_value}"
            )
        picks.append(prv)
    if _kernels.dist_alpha(front.xs, front.ys, 0, picks[-1], params.alpha) < opt_value:
        raise InconsistentOptimumError(f"walk does not close at spacing {opt_value}")
    picks.append(0)
    return tuple(reversed(picks))


def index_bounds(front: SortedFront, p: int, opt_value: float, params: DispersionParams) -> IndexBounds:
    """Lower/upper index bounds from the two greedy walks."""
    return IndexBounds(
        lower=backtrack_greedy(front, p, opt_value, params, MIN_INDEXES),
        upper=backtrack_greedy(front, p, opt_value, params, MAX_INDEXES),
    )


def _solve_p3_value(front: SortedFront, params: DispersionParams) -> float:
    """Optimal 3-selection value: extremes fixed, one scan over the middle."""
    return float(_kernels.maxmin_p3_value(front.xs, front.ys, params.alpha))


def solve(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    backtrack: str = MIN_INDEXES,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
    fast_paths: bool = True,
) -> Selection:
    """Optimal Max-Min p-dispersion.

    p=2 and p=3 are closed-form/linear scans; p=n is the only feasible
    selection.  Otherwise rows are computed keeping two rows live and the
    selection is recovered by the greedy walk in the requested direction.
    """
    n = front.n
    if not 2 <= p <= n:
        raise InfeasibleParameterError(f"p must be in [2, {n}], got {p}")
    if fast_paths:
        if p == 2:
            cost = dist(front, 0, n - 1, params)
            return Selection(Variant.MAX_MIN, p, (0, n - 1), cost, SolveMethod.DP)
        if p == n:
            cost = float(consecutive_dists(front, np.arange(n), params.alpha).min())
            return Selection(Variant.MAX_MIN, p, tuple(range(n)), cost, SolveMethod.DP)
        if p == 3:
            opt = _solve_p3_value(front, params)
            idx = backtrack_greedy(front, p, opt, params, backtrack)
            return Selection(Variant.MAX_MIN, p, idx, opt, SolveMethod.DP)
    layer = initial_layer(front, params)
    if tracker:
        tracker.alloc(n)
    for _ in range(3, p + 1):
        nxt = compute_layer(front, layer, params, threads=threads)
        if tracker:
            tracker.alloc(n)
            tracker.free(n)
        layer = nxt
    opt = float(layer.values[n - 1])
    if tracker:
        tracker.free(n)
    idx = backtrack_greedy(front, p, opt, params, backtrack)
    return Selection(Variant.MAX_MIN, p, idx, opt, SolveMethod.DP)
