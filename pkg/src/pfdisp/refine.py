"""Lexicographic Max-Min/neighbour-sum optimization, local polishing, and
clustering-seed selection.

Max-Min optima are rarely unique: once the bottleneck edge is fixed, other
selected points can often move freely.  ``solve_hierarchic`` breaks those
ties by the neighbour-sum (favouring evenly spread selections) and
``polish`` cheaply re-balances any anchored selection in place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import dp_maxmin, dp_msn
from .core import (
    DispersionParams,
    InfeasibleParameterError,
    SortedFront,
    consecutive_dists,
    dist,
)
from .oracle import Selection, SolveMethod, Variant
from .parallel import CellTracker

__all__ = ["LexCost", "solve_hierarchic", "polish", "seed_centroids",
           "STRATEGY_DIRECT", "STRATEGY_INTERMEDIATE"]

STRATEGY_DIRECT = "direct"
STRATEGY_INTERMEDIATE = "intermediate"

PRIMARY_TIE_REL_TOL = 1e-12


@dataclass(frozen=True)
class LexCost:
    """A (Max-Min value, neighbour-sum value) pair ordered lexicographically.

    Primary values within a small relative tolerance count as tied, since
    analytically equal distances may round differently.
    """

    primary: float
    secondary: float

    def ties_primary(self, other: "LexCost") -> bool:
        scale = max(abs(self.primary), abs(other.primary))
        return abs(self.primary - other.primary) <= PRIMARY_TIE_REL_TOL * scale

    def better_than(self, other: "LexCost") -> bool:
        if not self.ties_primary(other):
            return self.primary > other.primary
        return self.secondary > other.secondary


def solve_hierarchic(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
) -> Selection:
    """Best neighbour-sum among the extreme-anchored Max-Min optima.

    Two phases: the Max-Min optimum OPT is solved first; then a chain DP
    maximizes the neighbour sum over anchored selections all of whose
    consecutive edges are >= OPT — exactly the anchored selections whose
    Max-Min value equals OPT.  The returned cost is the Max-Min value, the
    neighbour sum rides along as secondary cost.
    """
    n = front.n
    if not 2 <= p <= n:
        raise InfeasibleParameterError(f"p must be in [2, {n}], got {p}")
    opt_mm = dp_maxmin.solve(front, p, params, threads=threads).cost
    if p == 2:
        return Selection(
            Variant.MAX_MIN, p, (0, n - 1), opt_mm, SolveMethod.HIERARCHIC,
            secondary_cost=dist(front, 0, n - 1, params),
        )
    if p == n:
        msn = float(consecutive_dists(front, np.arange(n), params.alpha).sum())
        return Selection(
            Variant.MAX_MIN, p, tuple(range(n)), opt_mm, SolveMethod.HIERARCHIC,
            secondary_cost=msn,
        )
    table = dp_msn._build_table(front, p, params, threads, tracker, min_edge=opt_mm)
    opt_msn, j_star = dp_msn._close_chain(front, table.rows[-1], p, params, opt_mm)
    assert math.isfinite(opt_msn), "the Max-Min optimum is always edge-feasible"
    indices = dp_msn._backtrack(front, table, p, j_star, params, opt_mm)
    if tracker:
        tracker.free(len(table.rows) * n)
    return Selection(
        Variant.MAX_MIN, p, indices, opt_mm, SolveMethod.HIERARCHIC,
        secondary_cost=opt_msn,
    )


def _best_middle(front: SortedFront, a: int, c: int, params: DispersionParams) -> Tuple[int, float]:
    """argmax over m in (a, c) of min(d(a, m), d(m, c)) by dichotomic search.

    d(a, m) grows and d(m, c) shrinks in m, so their min peaks where they
    cross; ties go to the smaller index.
    """
    lo, hi = a + 1, c - 1
    while hi - lo >= 2:
        mid = (lo + hi) >> 1
        if dist(front, a, mid, params) > dist(front, mid, c, params):
            hi = mid
        else:
            lo = mid
    v_lo = min(dist(front, a, lo, params), dist(front, lo, c, params))
    v_hi = min(dist(front, a, hi, params), dist(front, hi, c, params))
    return (lo, v_lo) if v_lo >= v_hi else (hi, v_hi)


def polish(front: SortedFront, indices, params: DispersionParams) -> Tuple[int, ...]:
    """Re-balance an anchored selection by local 3-point moves.

    Sweeps the interior; each selected point is moved to the position that
    maximizes the min distance to its two selected neighbours (the 3-point
    Max-Min optimum between them).  Ties keep the incumbent, so the Max-Min
    value never decreases and a sweep with no move is a fixed point.
    """
    idx = [int(i) for i in indices]
    if len(idx) < 2 or any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing: {indices}")
    if idx[0] != 0 or idx[-1] != front.n - 1:
        raise ValueError("selection must be anchored at the extreme points")
    changed = True
    while changed:
        changed = False
        for t in range(1, len(idx) - 1):
            a, b, c = idx[t - 1], idx[t], idx[t + 1]
            if c - a < 2:
                continue
            cur = min(dist(front, a, b, params), dist(front, b, c, params))
            m, val = _best_middle(front, a, c, params)
            if val > cur:
                idx[t] = m
                changed = True
    return tuple(idx)


def seed_centroids(
    front: SortedFront,
    k: int,
    strategy: str,
    params: DispersionParams,
    threads: int = 1,
) -> Tuple[int, ...]:
    """Pick k cluster seeds from the front via Max-Min dispersion.

    ``direct`` returns the k-dispersion optimum itself; ``intermediate``
    solves (2k+1)-dispersion and keeps the alternating interior points,
    yielding seeds that sit between well-spread boundaries.
    """
    if strategy == STRATEGY_DIRECT:
        if not 2 <= k <= front.n:
            raise InfeasibleParameterError(f"direct strategy needs 2 <= k <= n, got k={k}")
        return dp_maxmin.solve(front, k, params, threads=threads).indices
    if strategy == STRATEGY_INTERMEDIATE:
        if k < 1 or 2 * k + 1 > front.n:
            raise InfeasibleParameterError(
                f"intermediate strategy needs 2k+1 <= n, got k={k}, n={front.n}"
            )
        sol = dp_maxmin.solve(front, 2 * k + 1, params, threads=threads)
        return tuple(sol.indices[1:-1:2])
    raise ValueError(f"unknown strategy {strategy!r}")
