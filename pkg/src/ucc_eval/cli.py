"""Command-line surface: ``ucc <command> ...``.

Exit codes: 0 on success, 1 on validation errors (printed to stderr as
``ErrorName: message``), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .calibration import conformal_scale
from .cost import isocost_slope, min_cost
from .curve import (
    BANDWIDTH_MISS_RATE,
    EXCESS_DEFICIT,
    EXCESS_MISS_RATE,
    Curve,
    auucc,
    auucc_gain,
    build_curve,
    constant_reference,
)
from .errors import UccError
from .fixtures import generate_gap_fixture
from .io import Report, file_sha256, read_batch, write_batch_csv
from .significance import compare_auucc
from .svg import render_svg

_FORMATS = {"csv-bounds": "csv_bounds", "csv-bands": "csv_bands", "json": "json"}
_COORDS = {
    "bw-miss": BANDWIDTH_MISS_RATE,
    "ex-miss": EXCESS_MISS_RATE,
    "ex-def": EXCESS_DEFICIT,
}
_RULES = {"rect": "rectangular", "trap": "trapezoidal"}


def _window_arg(text: str) -> tuple[float, float]:
    try:
        lo_text, hi_text = text.split(":")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if not (0.0 <= lo < hi <= 1.0):
        raise argparse.ArgumentTypeError(f"window must satisfy 0 <= LO < HI <= 1, got {text!r}")
    return lo, hi


def _add_input(parser, name="--input"):
    parser.add_argument(name, required=True, help="input data file")
    parser.add_argument(
        "--format", choices=sorted(_FORMATS), default="csv-bounds",
        help="input file format (default: csv-bounds)",
    )


def _curve_summary(name: str, curve: Curve) -> dict:
    if curve.miss_floor > 0:
        areas = {"rectangular": None, "trapezoidal": None,
                 "note": "positive miss floor: full area diverges, use a window"}
    else:
        areas = {"rectangular": auucc(curve, "rectangular"),
                 "trapezoidal": auucc(curve, "trapezoidal")}
    return {
        "name": name,
        "coords": {"x": curve.coords.x_axis, "y": curve.coords.y_axis},
        "miss_floor": curve.miss_floor,
        "source_n": curve.source_n,
        "auucc": areas,
        "points": [
            {
                "k": p.k,
                "x": p.value(curve.coords.x_axis),
                "y": p.value(curve.coords.y_axis),
                "miss_rate": p.miss_rate,
                "bandwidth": p.bandwidth,
                "excess": p.excess,
                "deficit": p.deficit,
            }
            for p in curve.points
        ],
    }


def _metadata(args, inputs: dict, **extra) -> dict:
    meta = {
        "tool_version": __version__,
        "inputs": {name: file_sha256(path) for name, path in inputs.items()},
    }
    meta.update(extra)
    return meta


def _write_report(report: Report, out: str | None) -> None:
    if out:
        report.write(out)


def _cmd_curve(args) -> int:
    batch = read_batch(args.input, _FORMATS[args.format])
    curve = build_curve(batch, _COORDS[args.coords])
    report = Report(
        command="curve",
        metadata=_metadata(args, {"input": args.input}, coords=args.coords),
        curves=[_curve_summary("model", curve)],
    )
    report.write(args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg([curve], labels=["model"]))
    print(f"wrote {args.out}" + (f" and {args.svg}" if args.svg else ""))
    return 0


def _cmd_gain(args) -> int:
    batch = read_batch(args.input, _FORMATS[args.format])
    coords = _COORDS[args.coords]
    rule = _RULES[args.rule]
    gain = auucc_gain(batch, coords, window=args.window, rule=rule)
    report = Report(
        command="gain",
        metadata=_metadata(
            args, {"input": args.input}, coords=args.coords, rule=rule,
            window=list(args.window) if args.window else None,
        ),
        curves=[
            _curve_summary("model", build_curve(batch, coords)),
            _curve_summary("constant_reference", build_curve(constant_reference(batch), coords)),
        ],
        gain={
            "auucc_model": gain.auucc_model,
            "auucc_const": gain.auucc_const,
            "gain_percent": gain.gain_percent,
            "partial_window": list(gain.partial_window) if gain.partial_window else None,
        },
    )
    _write_report(report, args.out)
    window_note = f" over window {args.window[0]}:{args.window[1]}" if args.window else ""
    print(f"gain{window_note}: {gain.gain_percent:.4f}% "
          f"(model area {gain.auucc_model:.6g}, reference {gain.auucc_const:.6g})")
    return 0


def _cmd_compare(args) -> int:
    batch_a = read_batch(args.input_a, _FORMATS[args.format])
    batch_b = read_batch(args.input_b, _FORMATS[args.format])
    result = compare_auucc(
        batch_a, batch_b, _COORDS[args.coords],
        n_perm=args.n_perm, seed=args.seed, window=args.window,
        alternative=args.alternative,
    )
    report = Report(
        command="compare",
        metadata=_metadata(
            args, {"input_a": args.input_a, "input_b": args.input_b},
            coords=args.coords, seed=args.seed,
            window=list(args.window) if args.window else None,
            alternative=args.alternative,
        ),
        test={
            "observed_diff": result.observed_diff,
            "p_value": result.p_value,
            "n_permutations": result.n_permutations,
            "seed": result.seed,
        },
    )
    _write_report(report, args.out)
    print(f"observed diff: {result.observed_diff:.6g}  "
          f"p-value: {result.p_value:.6g}  ({result.n_permutations} permutations)")
    return 0


def _cmd_calibrate(args) -> int:
    batch = read_batch(args.input, _FORMATS[args.format])
    result = conformal_scale(batch, args.alpha)
    report = Report(
        command="calibrate",
        metadata=_metadata(args, {"input": args.input}, alpha=args.alpha),
        calibration={
            "q_hat": result.q_hat,
            "alpha": result.alpha,
            "n": result.n,
            "achieved_coverage": result.achieved_coverage,
        },
    )
    _write_report(report, args.out)
    print(f"q_hat: {result.q_hat:.6g}  achieved coverage: {result.achieved_coverage:.6g}")
    return 0


def _cmd_cost(args) -> int:
    batch = read_batch(args.input, _FORMATS[args.format])
    result = min_cost(batch, args.c)
    slope = isocost_slope(args.c)
    report = Report(
        command="cost",
        metadata=_metadata(args, {"input": args.input}, c=args.c),
        cost={
            "c": result.c,
            "k_star": result.k_star,
            "min_cost": result.min_cost,
            "isocost_slope": slope if slope != float("-inf") else None,
            "evaluations": [[k, v] for k, v in result.evaluations],
        },
    )
    _write_report(report, args.out)
    slope_text = "-inf" if slope == float("-inf") else f"{slope:.6g}"
    print(f"k_star: {result.k_star:.6g}  min cost: {result.min_cost:.6g}  "
          f"isocost slope: {slope_text}")
    return 0


def _cmd_fixture(args) -> int:
    fixture = generate_gap_fixture(args.n, args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    informative = out_dir / "informative.csv"
    shuffled = out_dir / "shuffled.csv"
    description = out_dir / "description.json"
    write_batch_csv(fixture.informative, informative, "csv_bands")
    write_batch_csv(fixture.shuffled, shuffled, "csv_bands")
    description.write_text(json.dumps(fixture.description, indent=2) + "\n")
    print(f"wrote {informative}, {shuffled}, {description}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ucc",
        description="Operating-point-agnostic evaluation of prediction intervals",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_curve = sub.add_parser("curve", help="build a curve and write a report")
    _add_input(p_curve)
    p_curve.add_argument("--coords", choices=sorted(_COORDS), default="bw-miss")
    p_curve.add_argument("--out", required=True, help="report JSON path")
    p_curve.add_argument("--svg", help="also render the curve to this SVG path")
    p_curve.set_defaults(func=_cmd_curve)

    p_gain = sub.add_parser("gain", help="area gain over the constant-band reference")
    _add_input(p_gain)
    p_gain.add_argument("--coords", choices=sorted(_COORDS), default="bw-miss")
    p_gain.add_argument("--window", type=_window_arg, help="miss-rate window LO:HI")
    p_gain.add_argument("--rule", choices=sorted(_RULES), default="rect")
    p_gain.add_argument("--out", help="optional report JSON path")
    p_gain.set_defaults(func=_cmd_gain)

    p_cmp = sub.add_parser("compare", help="paired permutation test of two models")
    p_cmp.add_argument("--input-a", required=True)
    p_cmp.add_argument("--input-b", required=True)
    p_cmp.add_argument(
        "--format", choices=sorted(_FORMATS), default="csv-bounds",
        help="input file format (default: csv-bounds)",
    )
    p_cmp.add_argument("--coords", choices=sorted(_COORDS), default="bw-miss")
    p_cmp.add_argument("--n-perm", type=int, required=True)
    p_cmp.add_argument("--seed", type=int, required=True)
    p_cmp.add_argument("--window", type=_window_arg, help="miss-rate window LO:HI")
    p_cmp.add_argument(
        "--alternative", choices=["two-sided", "greater", "less"], default="two-sided"
    )
    p_cmp.add_argument("--out", help="optional report JSON path")
    p_cmp.set_defaults(func=_cmd_compare)

    p_cal = sub.add_parser("calibrate", help="fit the conformal scale factor")
    _add_input(p_cal)
    p_cal.add_argument("--alpha", type=float, required=True)
    p_cal.add_argument("--out", help="optional report JSON path")
    p_cal.set_defaults(func=_cmd_calibrate)

    p_cost = sub.add_parser("cost", help="minimum linear cost over scales")
    _add_input(p_cost)
    p_cost.add_argument("--c", type=float, required=True, help="trade-off factor in [0, 1]")
    p_cost.add_argument("--out", help="optional report JSON path")
    p_cost.set_defaults(func=_cmd_cost)

    p_fix = sub.add_parser("fixture", help="write the synthetic gap fixture")
    p_fix.add_argument("--n", type=int, required=True)
    p_fix.add_argument("--seed", type=int, required=True)
    p_fix.add_argument("--out-dir", required=True)
    p_fix.set_defaults(func=_cmd_fixture)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UccError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
