"""Synthetic front generators, point ingestion, and result serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, List, Optional, Union

import numpy as np

from .core import (
    DispersionParams,
    NonFiniteError,
    Point2,
    SortedFront,
)
from .oracle import Selection, dispersion_cost

__all__ = [
    "ShapeKind",
    "FrontShape",
    "ParseError",
    "generate",
    "read_points",
    "write_selection",
]

COST_CHECK_REL_TOL = 1e-9


class ParseError(ValueError):
    """Malformed input file; carries the offending line or element index."""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line


class ShapeKind(str, Enum):
    AFFINE = "affine"
    CONVEX_ARC = "convex-arc"
    CONCAVE_ARC = "concave-arc"
    STAIRCASE = "staircase"
    CLUSTERED = "clustered"


@dataclass(frozen=True)
class FrontShape:
    """Recipe for a deterministic synthetic front."""

    kind: ShapeKind
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


def _increasing_positions(rng: np.random.Generator, n: int) -> np.ndarray:
    """n strictly increasing values in [0, 1] from positive random steps."""
    steps = rng.uniform(0.5, 1.5, size=n)
    t = np.cumsum(steps)
    t -= t[0]
    if n > 1:
        t /= t[-1]
    return t


def generate(shape: FrontShape) -> SortedFront:
    """Build a valid front of exactly n points; deterministic per seed.

    Strict monotonicity on both axes holds by construction (cumulative
    positive steps), never by rejection.
    """
    rng = np.random.default_rng(shape.seed)
    n = shape.n
    scale = float(n)
    if shape.kind is ShapeKind.AFFINE:
        xs = _increasing_positions(rng, n) * scale
        ys = scale - xs
    elif shape.kind in (ShapeKind.CONVEX_ARC, ShapeKind.CONCAVE_ARC):
        pad = 0.15
        theta = pad + _increasing_positions(rng, n) * (math.pi / 2 - 2 * pad)
        if shape.kind is ShapeKind.CONVEX_ARC:
            xs = scale * np.sin(theta)
            ys = scale * np.cos(theta)
        else:
            xs = scale * (1.0 - np.cos(theta))
            ys = scale * (1.0 - np.sin(theta))
    elif shape.kind is ShapeKind.STAIRCASE:
        xs = np.cumsum(rng.uniform(0.1, 1.1, size=n))
        ys = np.cumsum(rng.uniform(0.1, 1.1, size=n))
        ys = (ys[-1] + 1.0) - ys
    elif shape.kind is ShapeKind.CLUSTERED:
        groups = max(1, math.isqrt(n))
        boundary = np.zeros(n, dtype=bool)
        if groups > 1:
            period = max(1, n // groups)
            boundary[period::period] = True
        sx = rng.uniform(0.05, 0.15, size=n) + boundary * rng.uniform(10.0, 20.0, size=n)
        sy = rng.uniform(0.05, 0.15, size=n) + boundary * rng.uniform(10.0, 20.0, size=n)
        xs = np.cumsum(sx)
        ys = np.cumsum(sy)
        ys = (ys[-1] + 1.0) - ys
    else:  # pragma: no cover
        raise ValueError(f"unknown shape {shape.kind}")
    return SortedFront(xs, ys)


def _parse_float(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line) from None
    if not math.isfinite(value):
        raise NonFiniteError(f"non-finite coordinate {token!r} on line {line}")
    return value


def _read_csv(text: str) -> List[Point2]:
    points: List[Point2] = []
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t.strip() for t in line.split(",")]
        if not saw_data and [t.lower() for t in tokens] == ["x", "y"]:
            continue
        if len(tokens) != 2:
            raise ParseError(f"expected two comma-separated values, got {len(tokens)}", lineno)
        saw_data = True
        points.append(Point2(_parse_float(tokens[0], lineno), _parse_float(tokens[1], lineno)))
    if not points:
        raise ParseError("no points in input")
    return points


def _read_json(text: str) -> List[Point2]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(payload, list) or not payload:
        raise ParseError("expected a nonempty JSON array of [x, y] pairs")
    points: List[Point2] = []
    for pos, item in enumerate(payload):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise ParseError(f"element {pos} is not an [x, y] number pair")
        x, y = float(item[0]), float(item[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteError(f"non-finite coordinates in element {pos}")
        points.append(Point2(x, y))
    return points


def read_points(source: Union[str, bytes, IO], fmt: str) -> List[Point2]:
    """Parse points from CSV (``x,y`` lines, ``#`` comments, optional
    ``x,y`` header) or JSON (array of 2-element arrays), in file order."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt == "csv":
        return _read_csv(text)
    if fmt == "json":
        return _read_json(text)
    raise ValueError(f"unknown format {fmt!r}")


def write_selection(
    selection: Selection,
    front: SortedFront,
    fmt: str,
    alpha: float,
    elapsed_ms: float = 0.0,
) -> str:
    """Serialize a solved selection; the cost is re-verified before writing."""
    recomputed = dispersion_cost(
        front, selection.indices, selection.variant, DispersionParams(alpha)
    )
    scale = max(abs(recomputed), abs(selection.cost), 1e-300)
    if abs(recomputed - selection.cost) > COST_CHECK_REL_TOL * scale:
        raise AssertionError(
            f"selection cost {selection.cost} does not re-verify ({recomputed})"
        )
    if fmt == "csv":
        lines = ["index,x,y"]
        lines += [
            f"{i},{float(front.xs[i])!r},{float(front.ys[i])!r}"
            for i in selection.indices
        ]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "variant": selection.variant.value,
            "p": selection.p,
            "alpha": alpha,
            "n": front.n,
            "method": selection.method.value,
            "indices": list(selection.indices),
            "points": [[float(front.xs[i]), float(front.ys[i])] for i in selection.indices],
            "cost": selection.cost,
            "secondary_cost": selection.secondary_cost,
            "elapsed_ms": elapsed_ms,
        }
        return json.dumps(payload) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
