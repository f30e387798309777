"""Command-line harness.

Subcommands: classify | gamma | region | shapes | scaling | eigenbox |
figures.  Global flags: --out DIR (where files land; default: no files,
stdout only for record-producing commands), --format csv|json|svg for the
region exporter, --tol for scaling verdicts.  Exit codes: 0 ok, 1 a sweep
verdict failed, 2 usage error.  All commands are deterministic given their
flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from resolventlab.exponents import ExponentPair, exponents
from resolventlab.experiments import (
    DEFAULT_LADDERS,
    SweepPlan,
    eigenbox_report,
    run_sweep,
)
from resolventlab.spectral import RegionQuery, boundary_sample, shape_classify

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _pair(args) -> ExponentPair:
    try:
        return ExponentPair(_rational(args.x), _rational(args.y))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("window must be re_min,re_max,im_min,im_max")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad window {text!r}") from exc
    if not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise UsageError("window is degenerate")
    return vals


def _emit(record: dict, args, stem: str) -> None:
    text = json.dumps(record, indent=2, sort_keys=True)
    print(text)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{stem}.json").write_text(text + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_svg(path: Path, window, polylines) -> None:
    # plain polylines, viewBox matching the window; the vertical axis is
    # negated because svg y grows downward
    re_min, re_max, im_min, im_max = window
    width, height = re_max - re_min, im_max - im_min
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{re_min:g} {-im_max:g} {width:g} {height:g}">'
    ]
    for pts in polylines:
        if not pts:
            continue
        coords = " ".join(f"{x:.10g},{-y:.10g}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="black" '
            f'stroke-width="{0.004 * max(width, height):.4g}"/>'
        )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    pair = _pair(args)
    try:
        report = exponents(args.d, _rational(args.s), pair)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(report.to_dict(), args, "classify")
    return 0


def cmd_gamma(args) -> int:
    pair = _pair(args)
    try:
        report = exponents(args.d, _rational(args.s), pair)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rec = report.to_dict()
    _emit(
        {k: rec[k] for k in ("d", "x", "y", "gamma", "branch", "branch_tied")},
        args,
        "gamma",
    )
    return 0


def _query(args) -> RegionQuery:
    pair = _pair(args)
    try:
        return RegionQuery(args.d, _rational(args.s), pair, args.ell)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_shapes(args) -> int:
    query = _query(args)
    _emit(shape_classify(query).to_dict(query), args, "shape")
    return 0


def cmd_region(args) -> int:
    query = _query(args)
    window = _window(args.window)
    shape = shape_classify(query)
    polyline = boundary_sample(query, window, args.n)
    record = shape.to_dict(query)
    record["window"] = list(window)
    record["boundary_points"] = len(polyline)
    _emit(record, args, "region")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        if args.format in ("csv", "svg"):
            _write_csv(outdir / "region.csv", ["re", "im"], list(polyline))
        if args.format == "svg":
            _write_svg(outdir / "region.svg", window, [list(polyline)])
    return 0


def cmd_scaling(args) -> int:
    pair = _pair(args)
    deltas = (
        tuple(float(Fraction(t)) for t in args.deltas.split(","))
        if args.deltas
        else DEFAULT_LADDERS[args.experiment]
    )
    try:
        plan = SweepPlan(
            kind=args.experiment,
            d=args.d,
            s=float(_rational(args.s)),
            pair=pair,
            deltas=deltas,
            expected=args.expected,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = run_sweep(plan, tolerance=args.tol)
    record = result.to_dict()
    _emit(record, args, f"scaling_{args.experiment}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        keys = list(result.rows[0].keys())
        _write_csv(
            outdir / f"scaling_{args.experiment}.csv",
            keys,
            [[row[k] for k in keys] for row in result.rows],
        )
    return 0 if result.fit.passed else 1


def cmd_eigenbox(args) -> int:
    pair = _pair(args)
    try:
        report = eigenbox_report(
            pair,
            ell=args.ell,
            potential_name=args.potential,
            amplitude=args.amplitude,
            n=args.n,
            length=args.length,
            bound_constant=args.bound_constant,
            smallness=args.smallness,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(report, args, "eigenbox")
    return 0


def cmd_figures(args) -> int:
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    from resolventlab import figures

    if args.kind == "square":
        png = figures.render_square(args.d, outdir / f"square_d{args.d}.png")
        pts = []
        from resolventlab.exponents import critical_points

        cp = critical_points(args.d)
        names = ["B", "B_prime", "D", "D_prime", "E", "E_prime", "H", "P_star", "P_circ"]
        if args.d >= 3:
            names += ["A", "A_prime"]
        for name in names:
            pt = getattr(cp, name)
            pts.append([name, str(pt.x), str(pt.y)])
        _write_csv(outdir / f"square_d{args.d}_points.csv", ["point", "x", "y"], pts)
        print(json.dumps({"figure": str(png), "points_csv": str(outdir / f'square_d{args.d}_points.csv')}))
        return 0
    if args.kind == "region":
        query = _query(args)
        window = _window(args.window)
        polyline = boundary_sample(query, window, args.n)
        png = figures.render_region(query, window, polyline, outdir / "region.png")
        _write_csv(outdir / "region.csv", ["re", "im"], list(polyline))
        print(json.dumps({"figure": str(png), "csv": str(outdir / "region.csv"),
                          "shape": shape_classify(query).kind}))
        return 0
    # scaling
    data = Path(args.data)
    if not data.exists():
        raise UsageError(f"no such sweep record: {data}")
    record = json.loads(data.read_text())
    value_key = {"knapp": "ratio", "spherical": "qnorm", "kernel1d": "bound"}[record["kind"]]
    png = figures.render_scaling(record["rows"], value_key, record["fit"], outdir / "scaling.png")
    print(json.dumps({"figure": str(png)}))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resolventlab",
        description="exponent geography, spectral regions and scaling experiments "
        "for resolvent bounds",
    )
    parser.add_argument("--out", default=None, help="directory for emitted files")
    parser.add_argument(
        "--format", choices=("csv", "json", "svg"), default="csv",
        help="file format for region exports",
    )
    parser.add_argument("--tol", type=float, default=0.1, help="slope verdict tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pair(p, with_s=True):
        p.add_argument("-d", type=int, required=True, help="dimension")
        if with_s:
            p.add_argument("-s", default="2", help="operator order (rational)")
        p.add_argument("-x", required=True, help="1/p as a rational, e.g. 1/2")
        p.add_argument("-y", required=True, help="1/q as a rational")

    p = sub.add_parser("classify", help="region label, gamma, omega, branch")
    add_pair(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gamma", help="blow-up exponent and active branch")
    add_pair(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("shapes", help="closed-form shape of the sublevel region")
    add_pair(p)
    p.add_argument("--ell", type=float, default=1.0)
    p.set_defaults(func=cmd_shapes)

    p = sub.add_parser("region", help="sample the region boundary into CSV/SVG")
    add_pair(p)
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--window", default="-4,8,-5,5")
    p.add_argument("-n", type=int, default=200, help="samples per boundary component")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("scaling", help="run a delta sweep and fit the slope")
    p.add_argument("--experiment", choices=("knapp", "spherical", "kernel1d"), required=True)
    add_pair(p)
    p.add_argument("--deltas", default=None, help="comma list, e.g. 1/8,1/16,1/32,1/64")
    p.add_argument("--expected", type=float, default=None,
                   help="override the predicted slope (default: from the exponent map)")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("eigenbox", help="1-d discrete eigenvalue localisation demo")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--potential", choices=("gaussian", "box", "complex-bump"),
                   default="gaussian")
    p.add_argument("--amplitude", type=float, default=0.1)
    p.add_argument("-n", type=int, default=256)
    p.add_argument("--length", type=float, default=20.0)
    p.add_argument("--bound-constant", type=float, default=1.0,
                   help="the (non-certified) bound constant C")
    p.add_argument("--smallness", type=float, default=0.5, help="the number t in (0,1)")
    p.set_defaults(func=cmd_eigenbox)

    p = sub.add_parser("figures", help="render matplotlib figures next to their data")
    p.add_argument("--kind", choices=("region", "square", "scaling"), required=True)
    p.add_argument("-d", type=int, default=3)
    p.add_argument("-s", default="2")
    p.add_argument("-x", default="1/2")
    p.add_argument("-y", default="1/6")
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--window", default="-4,8,-5,5")
    p.add_argument("-n", type=int, default=200)
    p.add_argument("--data", default=None, help="sweep JSON for --kind scaling")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
