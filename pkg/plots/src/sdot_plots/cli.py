"""Command-line entry point: file-contract in, image files out."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .convergence import ConvergenceSpec, render_convergence
from .quantiles import render_quantiles


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdot-plots",
        description="Render figures from sdot trace/demo CSV files.",
    )
    parser.add_argument("--version", action="version", version="sdot-plots 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser(
        "convergence",
        help="log-log metric-vs-iteration curves with reference slopes",
    )
    conv.add_argument(
        "--spec",
        help="JSON plot-spec file; flags below override its fields",
    )
    conv.add_argument(
        "--trace",
        action="append",
        default=None,
        metavar="CSV",
        help="trace CSV (repeatable)",
    )
    conv.add_argument("--field", default=None, help="metric column (default err_gbar_sq)")
    conv.add_argument(
        "--ref-slope",
        action="append",
        type=float,
        default=None,
        metavar="S",
        help="dashed reference slope (repeatable)",
    )
    conv.add_argument("--out", default=None, help="output image path (png/svg/pdf)")
    conv.add_argument("--title", default=None)
    conv.add_argument("--xlabel", default=None)
    conv.add_argument("--ylabel", default=None)

    quant = sub.add_parser(
        "quantiles",
        help="scatter of mapped points colored by ring index",
    )
    quant.add_argument("--csv", required=True, help="quantiles demo CSV")
    quant.add_argument("--out", required=True, help="output image path (png/svg/pdf)")
    quant.add_argument("--title", default=None)

    return parser


def _convergence_spec(args: argparse.Namespace) -> ConvergenceSpec:
    data: dict = {}
    if args.spec:
        data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{args.spec}: plot spec must be a JSON object")
    if args.trace:
        data["traces"] = list(args.trace)
    if args.field is not None:
        data["field"] = args.field
    if args.ref_slope is not None:
        data["reference_slopes"] = list(args.ref_slope)
    if args.out is not None:
        data["out"] = args.out
    for key in ("title", "xlabel", "ylabel"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if "traces" not in data:
        raise ValueError("no traces given (use --trace or a --spec file)")
    if "out" not in data:
        raise ValueError("no output path given (use --out or a --spec file)")
    return ConvergenceSpec.from_json_dict(data)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "convergence":
            written = render_convergence(_convergence_spec(args))
        else:
            written = render_quantiles(args.csv, args.out, title=args.title)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
