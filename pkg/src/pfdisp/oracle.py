"""Ground-truth dispersion costs and brute-force reference solvers.

This module is the verification authority for the DP solvers: it evaluates
all five dispersion variants from their definitions and solves small
instances by exhaustive enumeration.  Enumeration is vectorized in chunks
but scans subsets in lexicographic order, so tie-breaking (smallest index
sequence) is deterministic and identical to a sequential scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, islice
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DispersionParams,
    InfeasibleParameterError,
    SortedFront,
    alpha_from_sq,
    consecutive_dists,
)

__all__ = [
    "Variant",
    "SolveMethod",
    "Selection",
    "BudgetExceededError",
    "dispersion_cost",
    "allpairs_cost",
    "brute_force",
    "lex_brute_force",
    "enumerate_optima",
]

ENUMERATION_BUDGET = 10**8
CHUNK_ROWS = 1 << 16
_CACHE_ROWS = 1 << 17

LEX_TIE_REL_TOL = 1e-12


class BudgetExceededError(RuntimeError):
    """Requested enumeration exceeds the combination budget."""


class Variant(Enum):
    """The five dispersion objectives."""

    MAX_MIN = "max-min"
    MAX_SUM = "max-sum"
    MAX_SUM_MIN = "max-sum-min"
    MAX_MIN_SUM = "max-min-sum"
    MAX_SUM_NEIGHBOR = "max-sum-neighbor"

    @classmethod
    def from_tag(cls, tag: str) -> "Variant":
        for v in cls:
            if v.value == tag:
                return v
        raise ValueError(f"unknown variant {tag!r}")


class SolveMethod(Enum):
    BRUTE_FORCE = "brute-force"
    DP = "dp"
    GREEDY = "greedy"
    HIERARCHIC = "hierarchic"
    POLISHED = "polished"


@dataclass(frozen=True)
class Selection:
    """A solved instance: which points were chosen and at what cost."""

    variant: Variant
    p: int
    indices: Tuple[int, ...]
    cost: float
    method: SolveMethod
    secondary_cost: Optional[float] = None

    def __post_init__(self) -> None:
        if self.p < 2 or len(self.indices) != self.p:
            raise ValueError(f"selection needs p >= 2 indices, got {self.indices}")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"indices must be strictly increasing: {self.indices}")


def _check_indices(front: SortedFront, indices) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1 or idx.size < 2:
        raise ValueError("need at least 2 indices")
    if not (np.diff(idx) > 0).all():
        raise ValueError("indices must be strictly increasing")
    if idx[0] < 0 or idx[-1] >= front.n:
        raise IndexError("index out of range")
    return idx


def _allpair_matrix(front: SortedFront, idx: np.ndarray, alpha: float) -> np.ndarray:
    x = front.xs[idx]
    y = front.ys[idx]
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    return alpha_from_sq(dx * dx + dy * dy, alpha)


def dispersion_cost(front: SortedFront, indices, variant: Variant, params: DispersionParams) -> float:
    """Dispersion value of a selection under the given variant.

    Max-Min and Max-Sum-Min use the consecutive-pair forms valid on sorted
    fronts (the nearest selected neighbour of a point is always one of its
    two selected neighbours in front order).
    """
    idx = _check_indices(front, indices)
    cons = consecutive_dists(front, idx, params.alpha)
    if variant is Variant.MAX_MIN:
        return float(cons.min())
    if variant is Variant.MAX_SUM_NEIGHBOR:
        return float(cons.sum())
    if variant is Variant.MAX_SUM_MIN:
        mid = np.minimum(cons[:-1], cons[1:]).sum() if cons.size > 1 else 0.0
        return float(cons[0] + cons[-1] + mid)
    d = _allpair_matrix(front, idx, params.alpha)
    if variant is Variant.MAX_SUM:
        return float(d.sum() / 2.0)
    if variant is Variant.MAX_MIN_SUM:
        return float(d.sum(axis=1).min())
    raise ValueError(f"unhandled variant {variant}")


def allpairs_cost(front: SortedFront, indices, variant: Variant, params: DispersionParams) -> float:
    """Dispersion value straight from the all-pairs definitions.

    Exists as a cross-check for the consecutive-pair forms used by
    ``dispersion_cost``; Max-Sum-Neighbor has no all-pairs form.
    """
    idx = _check_indices(front, indices)
    d = _allpair_matrix(front, idx, params.alpha)
    if variant is Variant.MAX_MIN:
        iu = np.triu_indices(idx.size, k=1)
        return float(d[iu].min())
    if variant is Variant.MAX_SUM_MIN:
        np.fill_diagonal(d, np.inf)
        return float(d.min(axis=1).sum())
    if variant is Variant.MAX_SUM:
        np.fill_diagonal(d, 0.0)
        return float(d.sum() / 2.0)
    if variant is Variant.MAX_MIN_SUM:
        np.fill_diagonal(d, 0.0)
        return float(d.sum(axis=1).min())
    raise ValueError(f"{variant} has no all-pairs form")


@lru_cache(maxsize=64)
def _combo_array(n: int, p: int) -> Optional[np.ndarray]:
    """All p-combinations of range(n) as one array, or None if too many."""
    if math.comb(n, p) > _CACHE_ROWS:
        return None
    return np.fromiter(
        (i for combo in combinations(range(n), p) for i in combo),
        dtype=np.intp,
    ).reshape(-1, p)


def _iter_selections(n: int, p: int, fix_extremes: bool) -> Iterator[np.ndarray]:
    """Yield (m, p) arrays of strictly increasing index rows, in lex order."""
    if fix_extremes:
        if p == 2:
            yield np.array([[0, n - 1]], dtype=np.intp)
            return
        mids = _combo_array(n - 2, p - 2)
        if mids is not None:
            m = mids.shape[0]
            rows = np.empty((m, p), dtype=np.intp)
            rows[:, 0] = 0
            rows[:, 1:-1] = mids + 1
            rows[:, -1] = n - 1
            yield rows
            return
        source = combinations(range(1, n - 1), p - 2)
        wrap = lambda combo: (0, *combo, n - 1)  # noqa: E731
    else:
        full = _combo_array(n, p)
        if full is not None:
            yield full
            return
        source = combinations(range(n), p)
        wrap = lambda combo: combo  # noqa: E731
    while True:
        block = list(islice(source, CHUNK_ROWS))
        if not block:
            return
        yield np.array([wrap(c) for c in block], dtype=np.intp)


def _chunk_costs(front: SortedFront, rows: np.ndarray, variant: Variant, alpha: float) -> np.ndarray:
    """Vectorized dispersion costs for a chunk of selections."""
    x = front.xs[rows]
    y = front.ys[rows]
    if variant in (Variant.MAX_MIN, Variant.MAX_SUM_NEIGHBOR, Variant.MAX_SUM_MIN):
        dx = np.diff(x, axis=1)
        dy = np.diff(y, axis=1)
        cons = alpha_from_sq(dx * dx + dy * dy, alpha)
        if variant is Variant.MAX_MIN:
            return cons.min(axis=1)
        if variant is Variant.MAX_SUM_NEIGHBOR:
            return cons.sum(axis=1)
        mid = (
            np.minimum(cons[:, :-1], cons[:, 1:]).sum(axis=1)
            if cons.shape[1] > 1
            else 0.0
        )
        return cons[:, 0] + cons[:, -1] + mid
    dx = x[:, :, None] - x[:, None, :]
    dy = y[:, :, None] - y[:, None, :]
    d = alpha_from_sq(dx * dx + dy * dy, alpha)
    if variant is Variant.MAX_SUM:
        return d.sum(axis=(1, 2)) / 2.0
    if variant is Variant.MAX_MIN_SUM:
        return d.sum(axis=2).min(axis=1)
    raise ValueError(f"unhandled variant {variant}")


def _check_problem(front: SortedFront, p: int, fix_extremes: bool) -> None:
    n = front.n
    if not 2 <= p <= n:
        raise InfeasibleParameterError(f"p must be in [2, {n}], got {p}")
    count = math.comb(n - 2, p - 2) if fix_extremes else math.comb(n, p)
    if count > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"{count} combinations exceed the {ENUMERATION_BUDGET} budget"
        )


def brute_force(
    front: SortedFront,
    p: int,
    variant: Variant,
    params: DispersionParams,
    fix_extremes: bool = False,
) -> Selection:
    """Exhaustive optimum; ties broken by smallest index sequence."""
    _check_problem(front, p, fix_extremes)
    best_cost = -math.inf
    best_rows: Optional[Tuple[int, ...]] = None
    for rows in _iter_selections(front.n, p, fix_extremes):
        costs = _chunk_costs(front, rows, variant, params.alpha)
        t = int(np.argmax(costs))
        if costs[t] > best_cost:
            best_cost = float(costs[t])
            best_rows = tuple(int(v) for v in rows[t])
    assert best_rows is not None
    return Selection(variant, p, best_rows, best_cost, SolveMethod.BRUTE_FORCE)


def enumerate_optima(
    front: SortedFront,
    p: int,
    variant: Variant,
    params: DispersionParams,
    fix_extremes: bool = False,
    rel_tol: float = 0.0,
) -> Tuple[float, List[Tuple[int, ...]]]:
    """Optimal cost and every selection achieving it (within rel_tol)."""
    best = brute_force(front, p, variant, params, fix_extremes).cost
    thresh = best - rel_tol * abs(best)
    optima: List[Tuple[int, ...]] = []
    for rows in _iter_selections(front.n, p, fix_extremes):
        costs = _chunk_costs(front, rows, variant, params.alpha)
        for t in np.flatnonzero(costs >= thresh):
            optima.append(tuple(int(v) for v in rows[t]))
    return best, optima


def lex_brute_force(
    front: SortedFront,
    p: int,
    params: DispersionParams,
    fix_extremes: bool = False,
) -> Selection:
    """Best Max-Sum-Neighbor value among the Max-Min optimal selections.

    The Max-Min tie set is taken within a small relative tolerance since
    analytically equal distances may round differently.  The returned
    selection carries the Max-Min value as cost and the neighbour-sum value
    as secondary cost.
    """
    _check_problem(front, p, fix_extremes)
    best_mm = brute_force(front, p, Variant.MAX_MIN, params, fix_extremes).cost
    thresh = best_mm - LEX_TIE_REL_TOL * abs(best_mm)
    best_msn = -math.inf
    best_rows: Optional[Tuple[int, ...]] = None
    for rows in _iter_selections(front.n, p, fix_extremes):
        mm = _chunk_costs(front, rows, Variant.MAX_MIN, params.alpha)
        tie = mm >= thresh
        if not tie.any():
            continue
        msn = _chunk_costs(front, rows, Variant.MAX_SUM_NEIGHBOR, params.alpha)
        msn = np.where(tie, msn, -math.inf)
        t = int(np.argmax(msn))
        if msn[t] > best_msn:
            best_msn = float(msn[t])
            best_rows = tuple(int(v) for v in rows[t])
    assert best_rows is not None
    return Selection(
        Variant.MAX_MIN,
        p,
        best_rows,
        best_mm,
        SolveMethod.BRUTE_FORCE,
        secondary_cost=best_msn,
    )
