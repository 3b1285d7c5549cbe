"""Point/front data model, validation, sorting and distance primitives.

A valid front is a set of mutually incomparable points under the
minimize-both-objectives dominance relation.  Sorted by increasing first
coordinate, such a front has strictly decreasing second coordinate, which
gives a total order on the points and a monotone distance structure that
all solvers in this package rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

__all__ = [
    "Point2",
    "DispersionParams",
    "SortedFront",
    "ValidationReport",
    "ValidationError",
    "EmptyFrontError",
    "NonFiniteError",
    "InfeasibleParameterError",
    "validate",
    "sort_front",
    "filter_dominated",
    "dist",
    "extreme_points",
]


class NonFiniteError(ValueError):
    """A coordinate is NaN or infinite."""


class EmptyFrontError(ValueError):
    """No points survived filtering (cannot happen for finite nonempty input)."""


class InfeasibleParameterError(ValueError):
    """A size parameter (p, k, ...) is outside its feasible range."""


@dataclass(frozen=True)
class Point2:
    """One element of a bi-objective front, both objectives minimized."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteError(f"non-finite coordinates ({self.x}, {self.y})")


@dataclass(frozen=True)
class DispersionParams:
    """Distance parameters: the exponent applied to the Euclidean distance."""

    alpha: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"alpha must be finite and > 0, got {self.alpha}")


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of front validation.

    ``violations`` holds ``((i, j), reason)`` pairs using positions in the
    original input; ``reason`` is one of ``duplicate``, ``dominates``,
    ``tie-on-axis``.  ``ok`` is true iff the list is empty.
    """

    ok: bool
    violations: Tuple[Tuple[Tuple[int, int], str], ...] = field(default_factory=tuple)

    def describe(self) -> str:
        if self.ok:
            return "valid front"
        lines = [f"invalid front: {len(self.violations)} violation(s)"]
        for (i, j), reason in self.violations:
            lines.append(f"  points {i} and {j}: {reason}")
        return "\n".join(lines)


class ValidationError(ValueError):
    """Raised when a point set is not a valid strict front."""

    def __init__(self, report: ValidationReport):
        super().__init__(report.describe())
        self.report = report


def _as_xy(points) -> Tuple[np.ndarray, np.ndarray]:
    """Coerce a point sequence (Point2s, pairs, or (n,2) array) to x/y arrays."""
    if isinstance(points, SortedFront):
        return points.xs, points.ys
    arr = np.asarray(
        [(p.x, p.y) if isinstance(p, Point2) else (p[0], p[1]) for p in points]
        if not isinstance(points, np.ndarray)
        else points,
        dtype=np.float64,
    )
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("expected a nonempty sequence of 2d points")
    xs = np.ascontiguousarray(arr[:, 0])
    ys = np.ascontiguousarray(arr[:, 1])
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise NonFiniteError("points contain NaN or infinite coordinates")
    return xs, ys


class SortedFront:
    """An immutable valid front in sorted order.

    Coordinates are stored as read-only float64 arrays with ``xs`` strictly
    increasing and ``ys`` strictly decreasing.  ``index_map`` (when present)
    maps original input positions to sorted positions.
    """

    __slots__ = ("xs", "ys", "index_map")

    def __init__(self, xs: np.ndarray, ys: np.ndarray, index_map: np.ndarray | None = None):
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size == 0:
            raise ValueError("xs and ys must be nonempty 1d arrays of equal length")
        if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
            raise NonFiniteError("front coordinates must be finite")
        if xs.size > 1 and not ((np.diff(xs) > 0).all() and (np.diff(ys) < 0).all()):
            raise ValidationError(validate(np.stack([xs, ys], axis=1)))
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "index_map", index_map)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("SortedFront is immutable")

    @property
    def n(self) -> int:
        return self.xs.size

    def __len__(self) -> int:
        return self.xs.size

    def point(self, i: int) -> Point2:
        return Point2(float(self.xs[i]), float(self.ys[i]))

    @property
    def points(self) -> List[Point2]:
        return [Point2(float(x), float(y)) for x, y in zip(self.xs, self.ys)]

    def __repr__(self) -> str:
        return f"SortedFront(n={self.n})"


def validate(points) -> ValidationReport:
    """Check that every pair of points is mutually incomparable.

    Violations are detected on adjacent points of the lexicographic order,
    which witnesses every defect of a non-strict front: duplicates, shared
    coordinates, and dominated points.
    """
    xs, ys = _as_xy(points)
    n = xs.size
    if n == 1:
        return ValidationReport(ok=True)
    order = np.lexsort((ys, xs))
    violations: List[Tuple[Tuple[int, int], str]] = []
    ox, oy = xs[order], ys[order]
    for t in range(n - 1):
        i, j = int(order[t]), int(order[t + 1])
        if ox[t] == ox[t + 1] and oy[t] == oy[t + 1]:
            violations.append(((min(i, j), max(i, j)), "duplicate"))
        elif ox[t] == ox[t + 1] or oy[t] == oy[t + 1]:
            violations.append(((min(i, j), max(i, j)), "tie-on-axis"))
        elif oy[t + 1] > oy[t]:
            # sorted neighbour is worse on both objectives
            violations.append(((i, j), "dominates"))
    return ValidationReport(ok=not violations, violations=tuple(violations))


def sort_front(points) -> SortedFront:
    """Validate and sort a point set into front order.

    Raises ValidationError if any pair is comparable, duplicated, or shares
    a coordinate.  The result keeps an index map from original positions to
    sorted positions.
    """
    report = validate(points)
    if not report.ok:
        raise ValidationError(report)
    xs, ys = _as_xy(points)
    order = np.argsort(xs, kind="stable")
    inverse = np.empty_like(order)
    inverse[order] = np.arange(order.size)
    return SortedFront(xs[order], ys[order], index_map=inverse)


def filter_dominated(points) -> SortedFront:
    """Keep the maximal pairwise-incomparable subset of a point set.

    Among duplicates or weakly dominated points the lexicographically
    smallest (x, then y) survivor is kept.
    """
    xs, ys = _as_xy(points)
    order = np.lexsort((ys, xs))
    oy = ys[order]
    keep = np.empty(order.size, dtype=bool)
    keep[0] = True
    if order.size > 1:
        keep[1:] = oy[1:] < np.minimum.accumulate(oy)[:-1]
    kept = order[keep]
    if kept.size == 0:  # pragma: no cover - unreachable for finite input
        raise EmptyFrontError("all points eliminated")
    return SortedFront(xs[kept], ys[kept])


def alpha_from_sq(sq, alpha: float):
    """Distance-to-the-alpha from squared Euclidean distance.

    Works elementwise on scalars and arrays.  Every distance in this
    package funnels through here so that scalar and vectorized paths are
    bitwise identical (numpy ufuncs only; python ** differs from np.power
    in the last ulp).  The common exponents avoid pow entirely, which also
    keeps the result exactly monotone in ``sq``.
    """
    if alpha == 1.0:
        return np.sqrt(sq)
    if alpha == 2.0:
        return sq
    if alpha == 0.5:
        return np.sqrt(np.sqrt(sq))
    if alpha == 4.0:
        return sq * sq
    return np.power(sq, alpha * 0.5)


def dist(front: SortedFront, i: int, j: int, params: DispersionParams) -> float:
    """Euclidean distance between points i and j, raised to alpha."""
    n = front.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices ({i}, {j}) out of range for front of size {n}")
    dx = front.xs[j] - front.xs[i]
    dy = front.ys[j] - front.ys[i]
    return float(alpha_from_sq(dx * dx + dy * dy, params.alpha))


def dists_from(front: SortedFront, i: int, js: np.ndarray, alpha: float) -> np.ndarray:
    """Vector of distances from point i to each index in ``js``."""
    dx = front.xs[js] - front.xs[i]
    dy = front.ys[js] - front.ys[i]
    return alpha_from_sq(dx * dx + dy * dy, alpha)


def consecutive_dists(front: SortedFront, indices, alpha: float) -> np.ndarray:
    """Distances between consecutive members of an index sequence."""
    idx = np.asarray(indices, dtype=np.intp)
    dx = front.xs[idx[1:]] - front.xs[idx[:-1]]
    dy = front.ys[idx[1:]] - front.ys[idx[:-1]]
    return alpha_from_sq(dx * dx + dy * dy, alpha)


def extreme_points(points) -> Tuple[int, int]:
    """Positions of the minimal-x and maximal-x points, in one linear scan."""
    xs, _ = _as_xy(points)
    return int(np.argmin(xs)), int(np.argmax(xs))
