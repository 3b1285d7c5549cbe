"""Exact Max-Sum-Neighbor p-dispersion on a sorted front.

Row k of the table holds, for each i, the longest neighbour-chain value
over selections of k points from the first i+1 points that start at point
0 and end at point i.  Each cell scans its full candidate range, giving
O(p n^2) time; the table (rows 2..p-1) is kept for backtracking, O(p n)
space, or only two rows when just the value is needed.

The row kernel optionally rejects chain edges shorter than a threshold;
the hierarchic solver reuses it to maximize the neighbour sum over
selections whose every edge meets the Max-Min optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels
from .core import (
    DispersionParams,
    InfeasibleParameterError,
    SortedFront,
    consecutive_dists,
    dist,
    dists_from,
)
from .oracle import Selection, SolveMethod, Variant
from .parallel import CellTracker, chunk_ranges, run_layer_chunks

__all__ = ["MsnTable", "initial_row", "compute_row", "solve", "solve_value_only"]

NEG_INF = -math.inf

I_BLOCK = 512  # cells per parallel chunk; chunks scheduled widest-first


@dataclass(frozen=True)
class MsnTable:
    """Chain-value rows for layers k = 2 .. k_max, each of length n."""

    rows: List[np.ndarray]

    def row(self, k: int) -> np.ndarray:
        return self.rows[k - 2]

    @property
    def k_max(self) -> int:
        return len(self.rows) + 1


def initial_row(front: SortedFront, params: DispersionParams) -> np.ndarray:
    """Row k=2: chains {0, i} have value d(0, i)."""
    n = front.n
    row = np.empty(n, dtype=np.float64)
    row[0] = NEG_INF
    _kernels.fill_dists_from(front.xs, front.ys, 0, 1, n, params.alpha, row[1:])
    return row


def compute_row(
    front: SortedFront,
    prev: np.ndarray,
    k: int,
    params: DispersionParams,
    threads: int = 1,
    min_edge: Optional[float] = None,
) -> np.ndarray:
    """Row k from row k-1; cells are independent given the previous row."""
    n = front.n
    edge = NEG_INF if min_edge is None else min_edge
    out = np.empty(n, dtype=np.float64)
    out[: min(k - 1, n)] = NEG_INF
    if k - 1 < n:
        chunks = chunk_ranges(k - 1, n, I_BLOCK, descending=True)
        run_layer_chunks(
            lambda lo, hi: _kernels.msn_row_chunk(
                front.xs, front.ys, params.alpha, prev, k, lo, hi, edge, out
            ),
            chunks,
            threads,
        )
    return out


def _close_chain(
    front: SortedFront,
    last_row: np.ndarray,
    p: int,
    params: DispersionParams,
    min_edge: Optional[float],
) -> Tuple[float, int]:
    """Best chain value ending at n-1: max over j of row_{p-1}[j] + d(j, n-1)."""
    edge = NEG_INF if min_edge is None else min_edge
    opt, j_star = _kernels.msn_argmax_step(
        front.xs, front.ys, params.alpha, last_row, p - 2, front.n - 1, edge
    )
    return float(opt), int(j_star)


def _backtrack(
    front: SortedFront,
    table: MsnTable,
    p: int,
    j_star: int,
    params: DispersionParams,
    min_edge: Optional[float],
) -> Tuple[int, ...]:
    """Walk the stored rows back from the closing argmax; smallest j on ties."""
    edge = NEG_INF if min_edge is None else min_edge
    picks = [front.n - 1, j_star]
    i = j_star
    for k in range(p - 1, 2, -1):
        val, j = _kernels.msn_argmax_step(
            front.xs, front.ys, params.alpha, table.row(k - 1), k - 2, i, edge
        )
        assert val == table.row(k)[i], "backtrack must reproduce the stored cell"
        i = int(j)
        picks.append(i)
    picks.append(0)
    return tuple(reversed(picks))


def _check_p(front: SortedFront, p: int) -> None:
    if not 2 <= p <= front.n:
        raise InfeasibleParameterError(f"p must be in [2, {front.n}], got {p}")


def _solve_p3(front: SortedFront, params: DispersionParams) -> Tuple[float, int]:
    """Extremes fixed, one scan over the middle point."""
    n = front.n
    mids = np.arange(1, n - 1)
    left = dists_from(front, 0, mids, params.alpha)
    right = dists_from(front, n - 1, mids, params.alpha)
    cand = left + right
    t = int(np.argmax(cand))
    return float(cand[t]), int(mids[t])


def _build_table(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int,
    tracker: Optional[CellTracker],
    min_edge: Optional[float] = None,
) -> MsnTable:
    """Rows 2 .. p-1, all retained for backtracking."""
    n = front.n
    rows = [initial_row(front, params)]
    if min_edge is not None:
        rows[0] = np.where(rows[0] >= min_edge, rows[0], NEG_INF)
    if tracker:
        tracker.alloc(n)
    for k in range(3, p):
        rows.append(compute_row(front, rows[-1], k, params, threads, min_edge))
        if tracker:
            tracker.alloc(n)
    return MsnTable(rows)


def solve(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
    fast_paths: bool = True,
) -> Selection:
    """Optimal Max-Sum-Neighbor p-dispersion (always contains both extremes)."""
    n = front.n
    _check_p(front, p)
    if p == 2:
        # base row of the recurrence; no table to build
        cost = dist(front, 0, n - 1, params)
        return Selection(Variant.MAX_SUM_NEIGHBOR, p, (0, n - 1), cost, SolveMethod.DP)
    if fast_paths:
        if p == n:
            cost = float(consecutive_dists(front, np.arange(n), params.alpha).sum())
            return Selection(Variant.MAX_SUM_NEIGHBOR, p, tuple(range(n)), cost, SolveMethod.DP)
        if p == 3:
            cost, mid = _solve_p3(front, params)
            return Selection(Variant.MAX_SUM_NEIGHBOR, p, (0, mid, n - 1), cost, SolveMethod.DP)
    table = _build_table(front, p, params, threads, tracker)
    opt, j_star = _close_chain(front, table.rows[-1], p, params, None)
    indices = _backtrack(front, table, p, j_star, params, None)
    if tracker:
        tracker.free(len(table.rows) * n)
    return Selection(Variant.MAX_SUM_NEIGHBOR, p, indices, opt, SolveMethod.DP)


def solve_value_only(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    threads: int = 1,
    tracker: Optional[CellTracker] = None,
    fast_paths: bool = True,
) -> float:
    """Optimal value with only two live rows (no backtracking data)."""
    n = front.n
    _check_p(front, p)
    if p == 2:
        return dist(front, 0, n - 1, params)
    if fast_paths:
        if p == n:
            return float(consecutive_dists(front, np.arange(n), params.alpha).sum())
        if p == 3:
            return _solve_p3(front, params)[0]
    row = initial_row(front, params)
    if tracker:
        tracker.alloc(n)
    for k in range(3, p):
        nxt = compute_row(front, row, k, params, threads)
        if tracker:
            tracker.alloc(n)
            tracker.free(n)
        row = nxt
    opt, _ = _close_chain(front, row, p, params, None)
    if tracker:
        tracker.free(n)
    return opt
