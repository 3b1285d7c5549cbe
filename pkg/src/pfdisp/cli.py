"""Command-line front end: solve, validate, generate, bench, compare."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional, Tuple

from . import bench as bench_mod
from . import dp_maxmin, dp_msm, dp_msn, refine
from .core import (
    DispersionParams,
    EmptyFrontError,
    InfeasibleParameterError,
    NonFiniteError,
    SortedFront,
    ValidationError,
    filter_dominated,
    sort_front,
    validate,
)
from .instances import FrontShape, ParseError, ShapeKind, read_points, write_selection
from .oracle import (
    BudgetExceededError,
    Selection,
    SolveMethod,
    Variant,
    brute_force,
    dispersion_cost,
)
from .parallel import resolve_threads

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4

SOLVE_VARIANTS = (
    "max-min",
    "max-sum-neighbor",
    "max-sum-min",
    "hierarchic",
    "brute:max-min",
    "brute:max-sum",
    "brute:max-sum-min",
    "brute:max-min-sum",
    "brute:max-sum-neighbor",
)


def _sniff_format(path: str, flag: Optional[str]) -> str:
    if flag:
        return flag
    return "json" if path.endswith(".json") else "csv"


def _read_input(path: str, fmt: Optional[str]):
    if path == "-":
        return read_points(sys.stdin.read(), fmt or "csv")
    with open(path, "r", encoding="utf-8") as fh:
        return read_points(fh, _sniff_format(path, fmt))


def _load_front(args) -> SortedFront:
    points = _read_input(args.input, args.format)
    if args.filter_dominated:
        return filter_dominated(points)
    return sort_front(points)


def _threads(args) -> int:
    if args.threads is not None:
        return resolve_threads(args.threads)
    env = os.environ.get("PFD_THREADS")
    if env is not None:
        return resolve_threads(int(env))
    return resolve_threads(0)


def _cmd_solve(args) -> int:
    front = _load_front(args)
    params = DispersionParams(args.alpha)
    threads = _threads(args)
    direction = dp_maxmin.MIN_INDEXES if args.backtrack == "min" else dp_maxmin.MAX_INDEXES
    t0 = time.perf_counter()
    if args.variant.startswith("brute:"):
        tag = Variant.from_tag(args.variant.removeprefix("brute:"))
        sel = brute_force(front, args.p, tag, params, fix_extremes=args.fix_extremes)
    elif args.variant == "max-min":
        sel = dp_maxmin.solve(front, args.p, params, backtrack=direction, threads=threads)
        if args.polish:
            before_msn = dispersion_cost(front, sel.indices, Variant.MAX_SUM_NEIGHBOR, params)
            polished = refine.polish(front, sel.indices, params)
            cost = dispersion_cost(front, polished, Variant.MAX_MIN, params)
            after_msn = dispersion_cost(front, polished, Variant.MAX_SUM_NEIGHBOR, params)
            print(
                f"polish: max-min {sel.cost} -> {cost}; "
                f"neighbour-sum {before_msn} -> {after_msn}",
                file=sys.stderr,
            )
            sel = Selection(
                Variant.MAX_MIN, args.p, polished, cost, SolveMethod.POLISHED,
                secondary_cost=after_msn,
            )
    elif args.variant == "max-sum-neighbor":
        sel = dp_msn.solve(front, args.p, params, threads=threads)
    elif args.variant == "max-sum-min":
        sel = dp_msm.solve(front, args.p, params, threads=threads)
    elif args.variant == "hierarchic":
        sel = refine.solve_hierarchic(front, args.p, params, threads=threads)
    else:  # pragma: no cover - argparse choices forbid this
        raise ValueError(f"unknown variant {args.variant!r}")
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    sys.stdout.write(
        write_selection(sel, front, args.output_format, args.alpha, elapsed_ms)
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    points = _read_input(args.input, args.format)
    report = validate(points)
    if report.ok:
        print(json.dumps({"ok": True, "n": len(points)}))
        return EXIT_OK
    print(report.describe(), file=sys.stderr)
    return EXIT_VALIDATION


def _cmd_generate(args) -> int:
    front = bench_mod.generate(FrontShape(ShapeKind(args.shape), args.n, args.seed))
    if args.format == "json":
        payload = [[float(x), float(y)] for x, y in zip(front.xs, front.ys)]
        text = json.dumps(payload) + "\n"
    else:
        lines = ["x,y"] + [f"{float(x)!r},{float(y)!r}" for x, y in zip(front.xs, front.ys)]
        text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(tok) for tok in args.sizes.split(",")]
    report = bench_mod.run_bench(
        args.variant,
        sizes,
        args.p,
        alpha=args.alpha,
        shape=ShapeKind(args.shape),
        repeats=args.repeats,
        threads=_threads(args),
        seed=args.seed,
    )
    if args.json:
        print(json.dumps(bench_mod.report_to_json(report)))
    else:
        print(bench_mod.render_table(report))
    return EXIT_OK


def _compare_rows(front: SortedFront, p: int, params: DispersionParams, threads: int) -> List[dict]:
    rows = []
    solvers: List[Tuple[Variant, str, Selection]] = [
        (Variant.MAX_MIN, "dp", dp_maxmin.solve(front, p, params, threads=threads)),
        (Variant.MAX_SUM_NEIGHBOR, "dp", dp_msn.solve(front, p, params, threads=threads)),
        (Variant.MAX_SUM_MIN, "dp", dp_msm.solve(front, p, params, threads=threads)),
        (Variant.MAX_SUM, "brute-force", brute_force(front, p, Variant.MAX_SUM, params)),
        (Variant.MAX_MIN_SUM, "brute-force", brute_force(front, p, Variant.MAX_MIN_SUM, params)),
    ]
    for variant, method, sel in solvers:
        if method == "dp" and front.n <= 14:
            ref = brute_force(front, p, variant, params)
            scale = max(abs(ref.cost), 1e-300)
            assert abs(ref.cost - sel.cost) <= 1e-9 * scale, (
                f"{variant.value}: DP cost {sel.cost} != oracle {ref.cost}"
            )
        rows.append(
            {
                "variant": variant.value,
                "method": method,
                "cost": sel.cost,
                "indices": list(sel.indices),
            }
        )
    return rows


def _cmd_compare(args) -> int:
    front = _load_front(args)
    params = DispersionParams(args.alpha)
    rows = _compare_rows(front, args.p, params, _threads(args))
    if args.json:
        print(json.dumps(rows))
    else:
        print(f"{'variant':<18} {'method':<12} {'cost':<22} indices")
        for row in rows:
            print(
                f"{row['variant']:<18} {row['method']:<12} "
                f"{row['cost']:<22.12g} {row['indices']}"
            )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfdisp",
        description="Select p maximally dispersed points from a 2d Pareto front.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(sp):
        sp.add_argument("--input", "-i", required=True, help="points file, or - for stdin")
        sp.add_argument("--format", choices=("csv", "json"), default=None,
                        help="input format (default: by file extension)")
        sp.add_argument("--filter-dominated", action="store_true",
                        help="drop dominated/duplicate points instead of rejecting them")

    def add_threads(sp):
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads; 0 = all cores (default: $PFD_THREADS or 0)")

    sp = sub.add_parser("solve", help="solve one dispersion instance")
    add_io(sp)
    sp.add_argument("--variant", choices=SOLVE_VARIANTS, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--backtrack", choices=("min", "max"), default="min",
                    help="greedy recovery direction for max-min")
    sp.add_argument("--polish", action="store_true",
                    help="re-balance the max-min selection by local 3-point moves")
    sp.add_argument("--fix-extremes", action="store_true",
                    help="restrict brute-force enumeration to extreme-anchored selections")
    sp.add_argument("--output-format", choices=("json", "csv"), default="json")
    add_threads(sp)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("validate", help="check that an input is a strict front")
    add_io(sp)
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("generate", help="write a synthetic front")
    sp.add_argument("--shape", choices=[s.value for s in ShapeKind], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o", default="-", help="output file, or - for stdout")
    sp.set_defaults(func=_cmd_generate)

    sp = sub.add_parser("bench", help="time a solver across sizes")
    sp.add_argument("--variant", required=True)
    sp.add_argument("--sizes", required=True, help="comma-separated ascending sizes")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--shape", choices=[s.value for s in ShapeKind],
                    default=ShapeKind.STAIRCASE.value)
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--seed", type=int, default=1234)
    sp.add_argument("--json", action="store_true")
    add_threads(sp)
    sp.set_defaults(func=_cmd_bench)

    sp = sub.add_parser("compare", help="all five variants side by side")
    add_io(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--json", action="store_true")
    add_threads(sp)
    sp.set_defaults(func=_cmd_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if getattr(args, "polish", False) and args.variant != "max-min":
            print("--polish applies to --variant max-min only", file=sys.stderr)
            return EXIT_INFEASIBLE
        return args.func(args)
    except (ValidationError, ParseError, NonFiniteError, EmptyFrontError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleParameterError as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"enumeration budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
