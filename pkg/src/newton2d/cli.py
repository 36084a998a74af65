"""Command-line interface: solve / eval / verify / sweep / export-svg.

JSON goes to standard output; file artifacts go to --out paths.  Every
command is deterministic given its flags, with floats formatted at 17
significant digits.  Exit codes: 0 success, 1 usage or input error,
2 no-solution (mathematically meaningful), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import extremal, functional, jsonio, montecarlo, oracle
from .geometry import (
    ProblemSpec,
    Variant,
    make_triangle,
    profile_from_dict,
    validate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2
EXIT_VERIFY_FAILED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="newton2d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_solve = sub.add_parser("solve", help="closed-form solution report")
    _add_problem_flags(p_solve)
    p_solve.add_argument("--out", help="also write the JSON report to this path")

    p_eval = sub.add_parser("eval", help="evaluate the drag of a profile file")
    p_eval.add_argument("--profile", required=True, help="profile JSON path")
    p_eval.add_argument("--dim", type=int, choices=(2, 3), default=2)

    p_verify = sub.add_parser("verify", help="run numerical oracles against the closed form")
    _add_problem_flags(p_verify)
    p_verify.add_argument(
        "--oracle", choices=("dp", "perturb", "mc", "all"), default="all"
    )
    p_verify.add_argument("--cells", type=int, default=200)
    p_verify.add_argument("--levels", type=int, default=200)
    p_verify.add_argument("--trials", type=int, default=64)
    p_verify.add_argument("--eps", type=float, default=0.01)
    p_verify.add_argument("--samples", type=int, default=1_000_000)
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument(
        "--slope-bound",
        type=float,
        default=5.0,
        help="slope bound for the unrestricted DP oracle",
    )

    p_sweep = sub.add_parser("sweep", help="tabulate solutions across H/r to CSV")
    p_sweep.add_argument("--r", type=float, default=1.0)
    p_sweep.add_argument("--H-min", type=float, required=True, dest="h_min")
    p_sweep.add_argument("--H-max", type=float, required=True, dest="h_max")
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--cells", type=int, default=200)
    p_sweep.add_argument("--levels", type=int, default=200)

    p_svg = sub.add_parser("export-svg", help="render a profile (and its mirror) to SVG")
    p_svg.add_argument("--profile", required=True, help="profile JSON path")
    p_svg.add_argument("--out", required=True, help="SVG output path")
    p_svg.add_argument("--width", type=int, default=800)
    p_svg.add_argument("--height", type=int, default=600)
    return parser


def _add_problem_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=float, required=True)
    parser.add_argument("--H", type=float, required=True, dest="H")
    parser.add_argument(
        "--variant", choices=("restricted", "unrestricted"), required=True
    )


def _problem_spec(args: argparse.Namespace) -> ProblemSpec:
    if args.r <= 0.0 or args.H <= 0.0:
        raise _UsageError(f"r and H must be positive (got r={args.r}, H={args.H})")
    return ProblemSpec(r=args.r, H=args.H, variant=Variant(args.variant))


def cmd_solve(args: argparse.Namespace) -> int:
    spec = _problem_spec(args)
    report = extremal.solve(spec)
    text = jsonio.dumps(report.to_dict(spec))
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if report.status is extremal.SolutionStatus.NO_SOLUTION:
        return EXIT_NO_SOLUTION
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        with open(args.profile) as fh:
            data = json.load(fh)
        profile, spec = profile_from_dict(data)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read profile: {exc}\n")
        return EXIT_USAGE
    result = validate(profile, spec)
    if not result.ok:
        for issue in result.issues:
            sys.stderr.write(f"error: invalid profile: {issue}\n")
        return EXIT_USAGE
    payload = {"resistance_2d": functional.resistance_2d(profile)}
    if args.dim == 3:
        payload["resistance_3d"] = functional.resistance_3d(profile)
    sys.stdout.write(jsonio.dumps(payload))
    return EXIT_OK


def _verify_dp(spec: ProblemSpec, args: argparse.Namespace) -> dict:
    tol = 0.01 * spec.r
    if spec.variant is Variant.RESTRICTED:
        expected = min(
            functional.triangle_resistance(spec), spec.r - spec.H / 2.0
        )
        claim = "restricted DP minimum matches min(r^3/(r^2+H^2), r - H/2)"
        config = oracle.DpConfig(n_cells=args.cells, n_levels=args.levels)
    else:
        b = args.slope_bound
        expected = spec.r / (1.0 + b * b)
        claim = f"slope-bounded (B={b}) unrestricted DP minimum matches r/(1+B^2)"
        config = oracle.DpConfig(
            n_cells=args.cells, n_levels=args.levels, slope_bound=b
        )
    value, _ = oracle.dp_min_resistance(spec, config)
    return {
        "claim": claim,
        "expected": expected,
        "observed": value,
        "tolerance": tol,
        "pass": abs(value - expected) <= tol,
    }


def _verify_perturb(spec: ProblemSpec, args: argparse.Namespace) -> list[dict]:
    s = spec.H / spec.r
    config = oracle.PerturbationConfig(
        epsilon=args.eps, trials=args.trials, rng_seed=args.seed
    )
    report = oracle.second_variation_test(make_triangle(spec), spec, config)
    entries = [
        {
            "claim": "perturbation ratio matches integrand curvature f''(H/r)",
            "expected": report.expected_ratio,
            "observed": report.mean_ratio,
            "tolerance": 0.05 * abs(report.expected_ratio),
            "pass": abs(report.mean_ratio - report.expected_ratio)
            <= 0.05 * abs(report.expected_ratio),
        }
    ]
    threshold = extremal.SLOPE_THRESHOLD
    if abs(s - threshold) > 1e-9:
        expect_min = s > threshold
        observed_positive = report.min_delta > 0.0
        entries.append(
            {
                "claim": (
                    "straight contour is a weak local minimum"
                    if expect_min
                    else "straight contour admits drag-decreasing perturbations"
                ),
                "expected": expect_min,
                "observed": observed_positive,
                "tolerance": 0.0,
                "pass": observed_positive == expect_min,
            }
        )
    return entries


def _verify_mc(spec: ProblemSpec, args: argparse.Namespace) -> dict:
    report = extremal.solve(spec)
    if report.status is extremal.SolutionStatus.NO_SOLUTION:
        profile = make_triangle(spec)
        expected = functional.triangle_resistance(spec)
        claim = "MC drag of the straight contour matches r^3/(r^2+H^2)"
    else:
        profile = report.representative_profiles[0]
        expected = report.minimal_resistance
        claim = "MC drag of the solution profile matches the closed form"
    estimate = montecarlo.estimate_resistance(profile, args.samples, args.seed)
    tol = max(3.0 * estimate.std_error, 1e-9)
    return {
        "claim": claim,
        "expected": expected,
        "observed": estimate.estimate,
        "tolerance": tol,
        "pass": abs(estimate.estimate - expected) <= tol,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    spec = _problem_spec(args)
    checks: list[dict] = []
    if args.oracle in ("dp", "all"):
        checks.append(_verify_dp(spec, args))
    if args.oracle in ("perturb", "all"):
        checks.extend(_verify_perturb(spec, args))
    if args.oracle in ("mc", "all"):
        checks.append(_verify_mc(spec, args))
    payload = {"checks": checks, "pass": all(c["pass"] for c in checks)}
    sys.stdout.write(jsonio.dumps(payload))
    return EXIT_OK if payload["pass"] else EXIT_VERIFY_FAILED


def _sweep_rows(args: argparse.Namespace) -> list[dict]:
    r = args.r
    if args.steps < 2 or not (0.0 < args.h_min < args.h_max):
        raise _UsageError("need steps >= 2 and 0 < H-min < H-max")
    heights = [
        args.h_min + (args.h_max - args.h_min) * i / (args.steps - 1)
        for i in range(args.steps)
    ]
    marked = {
        math.sqrt(3.0) / 3.0 * r: "threshold-sqrt3over3",
        r: "crossover-H-equals-r",
    }
    rows = []
    for h in sorted(set(heights) | set(marked)):
        spec = ProblemSpec(r=r, H=h, variant=Variant.RESTRICTED)
        report = extremal.solve(spec)
        dp_value, _ = oracle.dp_min_resistance(
            spec, oracle.DpConfig(n_cells=args.cells, n_levels=args.levels)
        )
        status = report.status.value
        if h in marked:
            status = f"{status}[{marked[h]}]"
        rows.append(
            {
                "h_over_r": h / r,
                "triangle_R": functional.triangle_resistance(spec),
                "staircase_R": (r - h / 2.0) if h <= r else None,
                "dp_R": dp_value,
                "status": status,
            }
        )
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    rows = _sweep_rows(args)
    lines = ["h_over_r,triangle_R,staircase_R,dp_R,status"]
    for row in rows:
        stair = (
            jsonio.format_float(row["staircase_R"])
            if row["staircase_R"] is not None
            else ""
        )
        lines.append(
            ",".join(
                [
                    jsonio.format_float(row["h_over_r"]),
                    jsonio.format_float(row["triangle_R"]),
                    stair,
                    jsonio.format_float(row["dp_R"]),
                    row["status"],
                ]
            )
        )
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    sys.stdout.write(jsonio.dumps({"rows": len(rows), "out": args.out}))
    return EXIT_OK


def cmd_export_svg(args: argparse.Namespace) -> int:
    try:
        with open(args.profile) as fh:
            data = json.load(fh)
        profile, spec = profile_from_dict(data)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read profile: {exc}\n")
        return EXIT_USAGE
    try:
        svg = render_svg(profile, spec, args.width, args.height)
        with open(args.out, "w") as fh:
            fh.write(svg)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write SVG: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(jsonio.dumps({"out": args.out}))
    return EXIT_OK


def render_svg(profile, spec: ProblemSpec, width: int, height: int) -> str:
    """SVG with the contour, its mirror image across the y-axis, and axes.

    The mirrored copy shows the full symmetric body (the straight contour's
    body is a triangle).
    """
    margin = 50.0
    ys = [y for _, y in profile.breakpoints]
    y_top = max(max(ys), spec.H) * 1.05 or 1.0
    sx = (width - 2 * margin) / (2.0 * spec.r)
    sy = (height - 2 * margin) / y_top

    def to_px(x: float, y: float) -> tuple[float, float]:
        return margin + (x + spec.r) * sx, height - margin - y * sy

    def polyline(points: Sequence[tuple[float, float]], color: str) -> str:
        coords = " ".join(
            f"{px:.2f},{py:.2f}" for px, py in (to_px(x, y) for x, y in points)
        )
        return (
            f'<polyline points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="2"/>'
        )

    mirrored = [(-x, y) for x, y in reversed(profile.breakpoints)]
    ox, oy = to_px(0.0, 0.0)
    x_axis = f'<line x1="{margin:.2f}" y1="{oy:.2f}" x2="{width - margin:.2f}" y2="{oy:.2f}" stroke="#888" stroke-width="1"/>'
    y_axis = f'<line x1="{ox:.2f}" y1="{margin:.2f}" x2="{ox:.2f}" y2="{height - margin:.2f}" stroke="#888" stroke-width="1"/>'
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            x_axis,
            y_axis,
            polyline(profile.breakpoints, "#1f77b4"),
            polyline(mirrored, "#1f77b4"),
            "</svg>",
            "",
        ]
    )


_COMMANDS = {
    "solve": cmd_solve,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "export-svg": cmd_export_svg,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
