"""Exact p-dispersion solvers for two-dimensional Pareto fronts.

Select p well-spread representatives from a front of n mutually
non-dominated points.  Three objectives have polynomial exact solvers
(max-min, max-sum-neighbor, max-sum-min); all five classic variants are
available through the brute-force oracle at small scale.
"""

from . import bench, dp_maxmin, dp_msm, dp_msn, instances, oracle, refine
from .core import (
    DispersionParams,
    EmptyFrontError,
    InfeasibleParameterError,
    NonFiniteError,
    Point2,
    SortedFront,
    ValidationError,
    ValidationReport,
    dist,
    extreme_points,
    filter_dominated,
    sort_front,
    validate,
)
from .instances import FrontShape, ParseError, ShapeKind, generate, read_points, write_selection
from .oracle import (
    BudgetExceededError,
    Selection,
    SolveMethod,
    Variant,
    brute_force,
    dispersion_cost,
    lex_brute_force,
)
from .parallel import CellTracker
from .refine import polish, seed_centroids, solve_hierarchic

__version__ = "0.1.0"

__all__ = [
    "DispersionParams",
    "Point2",
    "SortedFront",
    "ValidationError",
    "ValidationReport",
    "EmptyFrontError",
    "NonFiniteError",
    "InfeasibleParameterError",
    "ParseError",
    "BudgetExceededError",
    "Variant",
    "Selection",
    "SolveMethod",
    "FrontShape",
    "ShapeKind",
    "CellTracker",
    "validate",
    "sort_front",
    "filter_dominated",
    "dist",
    "extreme_points",
    "dispersion_cost",
    "brute_force",
    "lex_brute_force",
    "generate",
    "read_points",
    "write_selection",
    "solve_hierarchic",
    "polish",
    "seed_centroids",
    "dp_maxmin",
    "dp_msn",
    "dp_msm",
    "oracle",
    "refine",
    "instances",
    "bench",
]
