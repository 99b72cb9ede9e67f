"""Command line front end (installed as ``sdot``).

Subcommands: ``solve`` (one run to a trace), ``bench`` (named benchmark
batches), ``sweep`` (hyperparameter grids), ``quantiles`` (ring-mapping
demo CSV), ``slopes`` (power-law fits on existing traces). All commands
exit 0 on success and 1 with a diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from . import __version__
from .bench import (
    ExperimentConfig,
    figure_configs,
    fit_loglog_slope,
    m_growth_experiment,
    mk_quantiles_demo,
    read_trace,
    run_many,
    trace_paths,
    write_slopes,
)

_CONFIG_FLAGS = (
    # (flag, config field, type)
    ("--example", "example", int),
    ("--target-csv", "target_path", str),
    ("--M", "M", int),
    ("--d", "d", int),
    ("--delta", "delta", float),
    ("--weight-seed", "weight_seed", int),
    ("--n-weight-mc", "n_weight_mc", int),
    ("--g-scale", "g_scale", float),
    ("--algorithm", "algorithm", str),
    ("--eps", "eps", float),
    ("--gamma1", "gamma1", float),
    ("--a", "a", float),
    ("--b", "b", float),
    ("--projection", "projection", str),
    ("--anchor", "anchor", int),
    ("--batch-size", "batch_size", int),
    ("--omega", "omega", float),
    ("--t-max", "t_max", int),
    ("--seed", "seed", int),
    ("--checkpoints-per-decade", "checkpoints_per_decade", int),
    ("--map-p", "map_p", float),
    ("--eval-n-mc-map", "eval_n_mc_map", int),
    ("--eval-n-mc-cost", "eval_n_mc_cost", int),
    ("--eval-seed", "eval_seed", int),
    ("--label", "label", str),
    ("--out-dir", "out_dir", str),
)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v != "")


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v != "")


def _field_list(text: str) -> tuple[str, ...]:
    return tuple(v for v in text.split(",") if v != "")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="JSON experiment config, or a trace .meta.json (its 'config' key is used)",
    )
    for flag, field, typ in _CONFIG_FLAGS:
        parser.add_argument(flag, dest=f"cfg_{field}", type=typ, default=None)
    parser.add_argument(
        "--no-scale-gamma",
        dest="cfg_scale_gamma_with_batch",
        action="store_const",
        const=False,
        default=None,
        help="do not multiply gamma1 by sqrt(batch_size)",
    )
    parser.add_argument(
        "--record-timing",
        dest="cfg_record_timing",
        action="store_const",
        const=True,
        default=None,
        help="also write wall_ms into the CSV (breaks byte reproducibility)",
    )


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    fields: dict = {}
    if args.config is not None:
        obj = json.loads(args.config.read_text(encoding="utf-8"))
        if "config" in obj and isinstance(obj["config"], dict):
            obj = obj["config"]
        fields.update(obj)
    for name in ExperimentConfig.__dataclass_fields__:
        value = getattr(args, f"cfg_{name}", None)
        if value is not None:
            fields[name] = value
    if fields.get("example") is None and fields.get("target_path") is None:
        fields["example"] = 3
    return ExperimentConfig.from_json_dict(fields)


def cmd_solve(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    run_many([config], jobs=1)
    print(trace_paths(config)["csv"])
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.figure == "fig4":
        m_list = args.M_list or (10, 20, 50, 100, 200)
        for example in (1, 3):
            m_growth_experiment(example, m_list, seeds=args.seeds, out_dir=args.out_dir)
            print(Path(args.out_dir) / f"mgrowth_ex{example}.csv")
        return 0
    configs = figure_configs(
        args.figure,
        out_dir=args.out_dir,
        t_max=args.t_max,
        seeds=args.seeds,
        eval_n_mc=args.eval_n_mc,
    )
    run_many(configs, jobs=args.jobs)
    for config in configs:
        csv_path = trace_paths(config)["csv"]
        try:
            write_slopes(csv_path, args.fit or ())
        except ValueError as exc:
            print(f"warning: no slope fit for {csv_path.name}: {exc}", file=sys.stderr)
        print(csv_path)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    grids = {
        "a": args.a,
        "b": args.b,
        "gamma1": args.gamma1,
        "omega": args.omega,
        "batch_size": args.batch_size,
    }
    grids = {k: v for k, v in grids.items() if v is not None}
    if not grids:
        raise ValueError("sweep needs at least one of --a/--b/--gamma1/--omega/--batch-size")
    names = sorted(grids)
    configs = []
    for seed in args.seeds:
        for combo in product(*(grids[n] for n in names)):
            overrides = dict(zip(names, combo))
            configs.append(
                ExperimentConfig(
                    example=args.example,
                    t_max=args.t_max,
                    seed=seed,
                    out_dir=args.out_dir,
                    eval_n_mc_map=args.eval_n_mc,
                    eval_n_mc_cost=args.eval_n_mc,
                    **overrides,
                )
            )
    run_many(configs, jobs=args.jobs)
    for config in configs:
        print(trace_paths(config)["csv"])
    return 0


def cmd_quantiles(args: argparse.Namespace) -> int:
    out = mk_quantiles_demo(
        args.target,
        t=args.t,
        seed=args.seed,
        out_csv=args.out,
        n_points=args.n_points,
    )
    print(out)
    return 0


def cmd_slopes(args: argparse.Namespace) -> int:
    window = None
    if (args.t_lo is None) != (args.t_hi is None):
        raise ValueError("--t-lo and --t-hi must be given together")
    if args.t_lo is not None:
        window = (args.t_lo, args.t_hi)
    for trace_path in args.traces:
        trace = read_trace(trace_path)
        for field in args.fields:
            fit = fit_loglog_slope(trace, field, window)
            print(
                f"{Path(trace_path).name} {field}: slope={fit.slope:.4f} "
                f"r2={fit.r_squared:.4f} window=[{fit.t_lo:g}, {fit.t_hi:g}] "
                f"n={fit.n_points}"
            )
        out = write_slopes(trace_path, args.fields, window)
        print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdot",
        description="semi-discrete optimal transport solver benchmarks",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one experiment and write its trace")
    _add_config_flags(solve)
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="run a named benchmark batch")
    bench.add_argument(
        "figure", choices=("fig1", "fig2", "fig4", "fig5", "fig6", "fig7", "fig8")
    )
    bench.add_argument("--out-dir", default="results")
    bench.add_argument("--t-max", type=int, default=None)
    bench.add_argument("--seeds", type=_int_list, default=(0,))
    bench.add_argument("--eval-n-mc", type=int, default=None)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument(
        "--M-list", dest="M_list", type=_int_list, default=None,
        help="fig4 only: M grid (default 10,20,50,100,200)",
    )
    bench.add_argument(
        "--fit", type=_field_list, default=("err_gbar_sq",),
        help="comma-separated trace fields to slope-fit after the runs",
    )
    bench.set_defaults(func=cmd_bench)

    sweep = sub.add_parser("sweep", help="grid over solver hyperparameters")
    sweep.add_argument("--example", type=int, default=2)
    sweep.add_argument("--t-max", type=int, default=10_000)
    sweep.add_argument("--seeds", type=_int_list, default=(0,))
    sweep.add_argument("--a", type=_float_list, default=None)
    sweep.add_argument("--b", type=_float_list, default=None)
    sweep.add_argument("--gamma1", type=_float_list, default=None)
    sweep.add_argument("--omega", type=_float_list, default=None)
    sweep.add_argument("--batch-size", type=_int_list, default=None)
    sweep.add_argument("--eval-n-mc", type=int, default=100_000)
    sweep.add_argument("--out-dir", default="results")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.set_defaults(func=cmd_sweep)

    quantiles = sub.add_parser("quantiles", help="ring-mapping demo CSV")
    quantiles.add_argument("--target", required=True, help="target point-cloud CSV")
    quantiles.add_argument("--t", type=int, default=100_000)
    quantiles.add_argument("--seed", type=int, default=0)
    quantiles.add_argument("--n-points", type=int, default=5000)
    quantiles.add_argument("--out", default=None)
    quantiles.set_defaults(func=cmd_quantiles)

    slopes = sub.add_parser("slopes", help="fit power laws on existing traces")
    slopes.add_argument("traces", nargs="+")
    slopes.add_argument("--fields", type=_field_list, default=("err_gbar_sq",))
    slopes.add_argument("--t-lo", type=float, default=None)
    slopes.add_argument("--t-hi", type=float, default=None)
    slopes.set_defaults(func=cmd_slopes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
