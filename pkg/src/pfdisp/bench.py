"""Scaling benchmarks: wall time per size, fitted log-log slope, peak cells."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import dp_maxmin, dp_msm, dp_msn, refine
from .core import DispersionParams, SortedFront
from .instances import FrontShape, ShapeKind, generate
from .oracle import Selection, Variant, brute_force
from .parallel import CellTracker

__all__ = ["BenchPoint", "BenchReport", "run_bench", "fit_loglog_slope",
           "render_table", "report_to_json", "make_solver"]


@dataclass(frozen=True)
class BenchPoint:
    n: int
    times_ms: List[float]
    median_ms: float
    peak_cells: int


@dataclass(frozen=True)
class BenchReport:
    variant: str
    shape: str
    p: int
    alpha: float
    threads: int
    repeats: int
    points: List[BenchPoint] = field(default_factory=list)
    slope: float = float("nan")

    @property
    def peak_bytes(self) -> int:
        return max((pt.peak_cells for pt in self.points), default=0) * 8


def fit_loglog_slope(sizes: Sequence[int], medians_ms: Sequence[float]) -> float:
    """Least-squares slope of log(time) against log(size)."""
    xs = np.log(np.asarray(sizes, dtype=np.float64))
    ys = np.log(np.asarray(medians_ms, dtype=np.float64))
    return float(np.polyfit(xs, ys, 1)[0])


def make_solver(variant: str) -> Callable[..., Selection]:
    """Map a CLI variant spelling to its solver callable."""
    if variant == "max-min":
        return dp_maxmin.solve
    if variant == "max-sum-neighbor":
        return dp_msn.solve
    if variant == "max-sum-min":
        return dp_msm.solve
    if variant == "hierarchic":
        return refine.solve_hierarchic
    if variant.startswith("brute:"):
        tag = Variant.from_tag(variant.removeprefix("brute:"))

        def _brute(front: SortedFront, p: int, params: DispersionParams,
                   threads: int = 1, tracker: Optional[CellTracker] = None) -> Selection:
            return brute_force(front, p, tag, params)

        return _brute
    raise ValueError(f"unknown variant {variant!r}")


def run_bench(
    variant: str,
    sizes: Sequence[int],
    p: int,
    alpha: float = 1.0,
    shape: ShapeKind = ShapeKind.STAIRCASE,
    repeats: int = 3,
    threads: int = 1,
    seed: int = 1234,
) -> BenchReport:
    """Time the solver across sizes and fit the growth exponent.

    Timing covers the solve call only; fronts are generated up front.  The
    peak-cell figure is the DP table high-water mark of one instrumented
    run per size.
    """
    if list(sizes) != sorted(set(sizes)):
        raise ValueError("sizes must be strictly ascending")
    if repeats < 3:
        raise ValueError(f"repeats must be >= 3, got {repeats}")
    solver = make_solver(variant)
    params = DispersionParams(alpha)
    points: List[BenchPoint] = []
    for n in sizes:
        front = generate(FrontShape(shape, n, seed))
        tracker = CellTracker()
        solver(front, p, params, threads=threads, tracker=tracker)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            solver(front, p, params, threads=threads)
            times.append((time.perf_counter() - t0) * 1e3)
        points.append(BenchPoint(n, times, statistics.median(times), tracker.peak))
    slope = fit_loglog_slope([pt.n for pt in points], [pt.median_ms for pt in points])
    return BenchReport(variant, shape.value, p, alpha, threads, repeats, points, slope)


def render_table(report: BenchReport) -> str:
    lines = [
        f"variant={report.variant} shape={report.shape} p={report.p} "
        f"alpha={report.alpha} threads={report.threads} repeats={report.repeats}",
        f"{'n':>10}  {'median_ms':>12}  {'peak_cells':>12}",
    ]
    for pt in report.points:
        lines.append(f"{pt.n:>10}  {pt.median_ms:>12.3f}  {pt.peak_cells:>12}")
    lines.append(f"fitted log-log slope: {report.slope:.3f}")
    lines.append(f"peak memory estimate: {report.peak_bytes} bytes")
    return "\n".join(lines)


def report_to_json(report: BenchReport) -> dict:
    return {
        "variant": report.variant,
        "shape": report.shape,
        "p": report.p,
        "alpha": report.alpha,
        "threads": report.threads,
        "repeats": report.repeats,
        "sizes": [pt.n for pt in report.points],
        "times_ms": [pt.times_ms for pt in report.points],
        "medians_ms": [pt.median_ms for pt in report.points],
        "peak_cells": [pt.peak_cells for pt in report.points],
        "slope": report.slope,
        "peak_bytes": report.peak_bytes,
    }
