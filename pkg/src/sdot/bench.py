"""Experiment harness: seeded solver runs persisted as CSV traces.

Each experiment is fully described by an :class:`ExperimentConfig`; the
trace CSV plus its ``.meta.json`` sidecar are deterministic functions of
that config, so re-running from a meta file reproduces the CSV
byte-for-byte (float cells are written with ``repr``). Checkpoints follow
a geometric schedule (default 20 per decade, always including 1 and
t_max).

Metric conventions per checkpoint t:

- ``eps``/``gamma``: the annealing value after step t and the step size
  used at step t.
- ``err_g_sq``, ``err_gbar_sq``, ``err_gbar_w_sq``: centered squared
  distances to the oracle potential for the last iterate, running mean,
  and log-power weighted mean. Empty when not tracked or no oracle.
- ``map_err`` (with its ``map_p``) and ``cost_est``/``cost_err``/
  ``cost_se``: Monte Carlo metrics at the run's primary potential (the
  running mean for averaged algorithms, the last iterate for sgd).
  Evaluation draws come from fixed side streams re-created at every
  checkpoint, so all checkpoints (and all runs sharing eval_seed) score
  against common random numbers.
- ``wall_ms``: cumulative solver wall time, excluding metric evaluation.
  Written to the CSV only when ``record_timing`` is set, since timestamps
  would break byte reproducibility; a ``.timing.json`` sidecar always
  carries them.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__
from .estimators import (
    map_error_lp,
    map_indices,
    ot_cost_estimate,
    potential_error_centered,
)
from .measures import (
    DiscreteMeasure,
    RngStream,
    SourceSpec,
    UniformBall,
    UniformBox,
    load_discrete_measure,
    make_example,
)
from .oracles import GroundTruth
from .solver import DragConfig, run_drag, run_fixed_eps

# Side streams for metric evaluation and the quantiles demo; the solver
# itself draws from stream 0.
EVAL_MAP_STREAM = 1
EVAL_COST_STREAM = 2
QUANTILE_STREAM = 4

TRACE_COLUMNS = (
    "t",
    "eps",
    "gamma",
    "err_g_sq",
    "err_gbar_sq",
    "err_gbar_w_sq",
    "map_err",
    "map_p",
    "cost_est",
    "cost_err",
    "cost_se",
    "wall_ms",
)

# Columns that must be finite and >= 0 wherever present.
_ERROR_COLUMNS = (
    "err_g_sq",
    "err_gbar_sq",
    "err_gbar_w_sq",
    "map_err",
    "cost_err",
    "cost_se",
)

_ALGORITHMS = ("drag", "sgd", "asgd")

TRACE_SCHEMA = "sdot-trace-1"
SLOPES_SCHEMA = "sdot-slopes-1"
TIMING_SCHEMA = "sdot-timing-1"


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one solver run plus its evaluation.

    Problem selection: ``example`` in {1, 2, 3} with optional overrides
    (M, d, delta, and for example 2 weight_seed / n_weight_mc / g_scale),
    or ``target_path`` pointing to a point-cloud CSV (no oracle metrics
    then). ``None`` problem fields take the example's defaults.

    ``eval_seed`` defaults to ``seed``; evaluation uses separate streams,
    so sharing it across runs gives common random numbers.
    """

    example: int | None = None
    target_path: str | None = None
    M: int | None = None
    d: int | None = None
    delta: float | None = None
    weight_seed: int | None = None
    n_weight_mc: int | None = None
    g_scale: float | None = None
    algorithm: str = "drag"
    eps: float | None = None
    gamma1: float | None = None
    a: float = 0.75
    b: float = 0.75
    projection: str = "anchored"
    anchor: int = 0
    batch_size: int = 1
    scale_gamma_with_batch: bool = True
    omega: float | None = None
    t_max: int = 10_000
    seed: int = 0
    checkpoints_per_decade: int = 20
    map_p: float = 2.0
    eval_n_mc_map: int = 100_000
    eval_n_mc_cost: int = 100_000
    eval_seed: int | None = None
    record_timing: bool = False
    label: str | None = None
    out_dir: str = "results"

    def __post_init__(self):
        if (self.example is None) == (self.target_path is None):
            raise ValueError("exactly one of example / target_path is required")
        if self.example is not None and self.example not in (1, 2, 3):
            raise ValueError("example must be 1, 2, or 3")
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(f"algorithm must be one of {_ALGORITHMS}")
        if self.algorithm in ("sgd", "asgd") and self.eps is None:
            raise ValueError(f"algorithm {self.algorithm!r} requires eps")
        if self.algorithm == "drag" and self.eps is not None:
            raise ValueError("eps is only meaningful for sgd/asgd")
        if self.omega is not None and self.algorithm != "drag":
            raise ValueError("omega requires algorithm 'drag'")
        if self.example != 2:
            for name in ("weight_seed", "n_weight_mc", "g_scale"):
                if getattr(self, name) is not None:
                    raise ValueError(f"{name} only applies to example 2")
        if self.example == 3 and self.d not in (None, 1):
            raise ValueError("example 3 is one-dimensional")
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.checkpoints_per_decade < 1:
            raise ValueError("checkpoints_per_decade must be >= 1")
        if self.map_p < 1:
            raise ValueError("map_p must be >= 1")
        if self.eval_n_mc_map < 0 or self.eval_n_mc_cost < 0:
            raise ValueError("evaluation sample counts must be >= 0")

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        return cls(**obj)


@dataclass
class RunTrace:
    """Checkpoint table of one run: integer ``t`` plus float columns
    (NaN where a metric was not recorded), and the run's meta dict."""

    t: np.ndarray
    columns: dict[str, np.ndarray]
    meta: dict | None = None

    def column(self, field: str) -> np.ndarray:
        if field == "t":
            return self.t
        return self.columns[field]


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares power-law fit ln(metric) = intercept + slope * ln(t)
    over checkpoints with t in [t_lo, t_hi]."""

    field: str
    t_lo: float
    t_hi: float
    slope: float
    intercept: float
    r_squared: float
    n_points: int

    def to_json_dict(self) -> dict:
        return asdict(self)


def checkpoint_schedule(t_max: int, per_decade: int = 20) -> tuple[int, ...]:
    """Geometric iteration grid: ~per_decade points per decade, always
    including 1 and t_max, strictly increasing integers."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    if per_decade < 1:
        raise ValueError("per_decade must be >= 1")
    if t_max == 1:
        return (1,)
    decades = math.log10(t_max)
    count = max(1, math.ceil(decades * per_decade))
    grid = np.logspace(0.0, decades, count + 1)
    ticks = np.unique(np.rint(grid).astype(np.int64))
    ticks = ticks[(ticks >= 1) & (ticks <= t_max)]
    if ticks[-1] != t_max:
        ticks = np.append(ticks, t_max)
    return tuple(int(v) for v in ticks)


def _example_params(config: ExperimentConfig) -> dict:
    """Example constructor kwargs with defaults filled in."""
    if config.example == 1:
        return {
            "M": 100 if config.M is None else config.M,
            "d": 10 if config.d is None else config.d,
        }
    if config.example == 2:
        return {
            "M": 30 if config.M is None else config.M,
            "d": 10 if config.d is None else config.d,
            "seed": 0 if config.weight_seed is None else config.weight_seed,
            "n_weight_mc": 10_000_000 if config.n_weight_mc is None else config.n_weight_mc,
            "g_scale": 0.05 if config.g_scale is None else config.g_scale,
        }
    if config.example == 3:
        return {
            "M": 1000 if config.M is None else config.M,
            "delta": 0.5 if config.delta is None else config.delta,
        }
    raise ValueError("config has no example")


@lru_cache(maxsize=8)
def _cached_example(example: int, key: tuple):
    return make_example(example, **dict(key))


def _problem(config: ExperimentConfig) -> tuple[SourceSpec, DiscreteMeasure, GroundTruth | None]:
    if config.example is not None:
        params = _example_params(config)
        return _cached_example(config.example, tuple(sorted(params.items())))
    target = load_discrete_measure(config.target_path)
    source = UniformBox(np.zeros(target.dim), np.ones(target.dim))
    return source, target, None


def derived_label(config: ExperimentConfig) -> str:
    """Deterministic file stem for a config without an explicit label."""
    if config.label is not None:
        return config.label
    bits = []
    if config.example is not None:
        bits.append(f"ex{config.example}")
        bits.append(f"M{_example_params(config)['M']}")
    else:
        bits.append(Path(config.target_path).stem)
    bits.append(config.algorithm)
    if config.eps is not None:
        bits.append(f"eps{config.eps:g}")
    if config.batch_size > 1:
        bits.append(f"nb{config.batch_size}")
    if config.omega is not None:
        bits.append(f"om{config.omega:g}")
    if (config.a, config.b) != (0.75, 0.75):
        bits.append(f"a{config.a:g}b{config.b:g}")
    bits.append(f"t{config.t_max}")
    bits.append(f"s{config.seed}")
    return "_".join(bits).replace("/", "-")


def trace_paths(config: ExperimentConfig) -> dict[str, Path]:
    stem = derived_label(config)
    out = Path(config.out_dir)
    return {
        "csv": out / f"{stem}.csv",
        "meta": out / f"{stem}.meta.json",
        "timing": out / f"{stem}.timing.json",
        "slopes": out / f"{stem}.slopes.json",
    }


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _format_trace_csv(t: np.ndarray, columns: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    buf.write(",".join(TRACE_COLUMNS) + "\n")
    for i in range(t.size):
        cells = [str(int(t[i]))]
        for name in TRACE_COLUMNS[1:]:
            v = columns[name][i]
            cells.append("" if np.isnan(v) else repr(float(v)))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def validate_trace(trace: RunTrace) -> None:
    """Schema check: strictly increasing t, error fields finite and >= 0."""
    t = np.asarray(trace.t)
    if t.size == 0:
        raise ValueError("trace has no rows")
    if np.any(np.diff(t) <= 0):
        raise ValueError("iterations must be strictly increasing")
    for name in _ERROR_COLUMNS:
        col = trace.columns[name]
        present = ~np.isnan(col)
        if np.any(np.isinf(col[present])) or np.any(col[present] < 0):
            raise ValueError(f"column {name} must be finite and >= 0")


def write_trace(trace: RunTrace, csv_path, meta_path=None) -> Path:
    validate_trace(trace)
    csv_path = Path(csv_path)
    _atomic_write_text(csv_path, _format_trace_csv(trace.t, trace.columns))
    if meta_path is not None and trace.meta is not None:
        _atomic_write_text(
            Path(meta_path), json.dumps(trace.meta, indent=2, sort_keys=True) + "\n"
        )
    return csv_path


def read_trace(csv_path) -> RunTrace:
    """Load a trace CSV (and its ``.meta.json`` sidecar when present)."""
    csv_path = Path(csv_path)
    with csv_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"{csv_path}: unexpected columns {header}")
        rows = [row for row in reader if row]
    t = np.array([int(row[0]) for row in rows], dtype=np.int64)
    columns = {}
    for j, name in enumerate(TRACE_COLUMNS[1:], start=1):
        columns[name] = np.array(
            [math.nan if row[j] == "" else float(row[j]) for row in rows]
        )
    meta = None
    meta_path = csv_path.with_name(csv_path.stem + ".meta.json")
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    trace = RunTrace(t=t, columns=columns, meta=meta)
    validate_trace(trace)
    return trace


def _solver_config(config: ExperimentConfig, schedule: tuple[int, ...]) -> DragConfig:
    return DragConfig(
        t_max=config.t_max,
        gamma1=config.gamma1,
        a=config.a,
        b=config.b,
        projection=config.projection,
        anchor=config.anchor,
        batch_size=config.batch_size,
        scale_gamma_with_batch=config.scale_gamma_with_batch,
        omega=config.omega,
        seed=config.seed,
        eval_schedule=schedule,
    )


def run_experiment(config: ExperimentConfig) -> RunTrace:
    """Run one experiment and write ``<label>.csv`` / ``.meta.json`` /
    ``.timing.json`` under ``config.out_dir``. Returns the trace."""
    source, target, truth = _problem(config)
    schedule = checkpoint_schedule(config.t_max, config.checkpoints_per_decade)
    solver_cfg = _solver_config(config, schedule).resolve(source, target)
    eval_seed = config.seed if config.eval_seed is None else config.eval_seed
    g_star = None if truth is None else truth.g_star
    true_map = None if truth is None else truth.true_map
    true_cost = None if truth is None else truth.true_cost
    averaged = config.algorithm in ("drag", "asgd")

    records: list[dict] = []
    t0 = time.perf_counter()
    eval_elapsed = 0.0

    def observer(state):
        nonlocal eval_elapsed
        wall_ms = (time.perf_counter() - t0 - eval_elapsed) * 1000.0
        started = time.perf_counter()
        row: dict = {name: math.nan for name in TRACE_COLUMNS[1:]}
        row["t"] = state.k
        row["eps"] = state.eps
        row["gamma"] = state.gamma
        row["wall_ms"] = wall_ms
        if g_star is not None:
            row["err_g_sq"] = potential_error_centered(state.g, g_star)
            if state.g_bar is not None:
                row["err_gbar_sq"] = potential_error_centered(state.g_bar, g_star)
            if state.g_bar_w is not None:
                row["err_gbar_w_sq"] = potential_error_centered(state.g_bar_w, g_star)
        primary = state.g_bar if (averaged and state.g_bar is not None) else state.g
        if true_map is not None and config.eval_n_mc_map > 0:
            gen = RngStream(eval_seed, EVAL_MAP_STREAM).generator()
            row["map_err"] = map_error_lp(
                primary, true_map, source, target,
                config.eval_n_mc_map, gen, p=config.map_p,
            )
            row["map_p"] = config.map_p
        if config.eval_n_mc_cost > 0:
            gen = RngStream(eval_seed, EVAL_COST_STREAM).generator()
            est, se = ot_cost_estimate(primary, source, target, config.eval_n_mc_cost, gen)
            row["cost_est"] = est
            row["cost_se"] = se
            if true_cost is not None:
                row["cost_err"] = abs(est - true_cost)
        records.append(row)
        eval_elapsed += time.perf_counter() - started

    if config.algorithm == "drag":
        run_drag(solver_cfg, source, target, observer)
    else:
        averaging = "plain" if config.algorithm == "asgd" else "none"
        run_fixed_eps(solver_cfg, config.eps, averaging, source, target, observer)

    t = np.array([r["t"] for r in records], dtype=np.int64)
    columns = {
        name: np.array([r[name] for r in records], dtype=float)
        for name in TRACE_COLUMNS[1:]
    }
    timing = [[int(r["t"]), float(r["wall_ms"])] for r in records]
    if not config.record_timing:
        columns["wall_ms"] = np.full(t.size, math.nan)

    paths = trace_paths(config)
    meta = {
        "schema": TRACE_SCHEMA,
        "version": __version__,
        "config": config.to_json_dict(),
        "resolved": {
            "label": derived_label(config),
            "gamma1": float(solver_cfg.gamma1),
            "radius_bound": float(solver_cfg.radius_bound),
            "eval_seed": int(eval_seed),
            "n_atoms": int(target.n_atoms),
            "dim": int(target.dim),
            "w_min": float(target.w_min),
            "true_cost": None if true_cost is None else float(true_cost),
            "checkpoints": [int(v) for v in schedule],
        },
        "columns": list(TRACE_COLUMNS),
    }
    trace = RunTrace(t=t, columns=columns, meta=meta)
    write_trace(trace, paths["csv"], paths["meta"])
    _atomic_write_text(
        paths["timing"],
        json.dumps(
            {
                "schema": TIMING_SCHEMA,
                "trace": paths["csv"].name,
                "wall_ms": timing,
            },
            indent=2,
        )
        + "\n",
    )
    return trace


def rerun_from_meta(meta_path) -> RunTrace:
    """Re-run the experiment recorded in a ``.meta.json`` file."""
    obj = json.loads(Path(meta_path).read_text(encoding="utf-8"))
    if "config" in obj:
        obj = obj["config"]
    return run_experiment(ExperimentConfig.from_json_dict(obj))


def run_many(configs, jobs: int = 1) -> list[RunTrace]:
    """Run independent experiments, optionally in a process pool.

    The shared problem instances are constructed once up front so forked
    workers inherit them instead of rebuilding (example 2's weight
    construction is expensive).
    """
    configs = list(configs)
    seen = set()
    for cfg in configs:
        if cfg.example is None:
            continue
        key = (cfg.example, tuple(sorted(_example_params(cfg).items())))
        if key not in seen:
            seen.add(key)
            _problem(cfg)
    if jobs <= 1 or len(configs) <= 1:
        return [run_experiment(cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_experiment, configs))


def fit_loglog_slope(
    trace: RunTrace,
    field: str,
    window: tuple[float, float] | None = None,
) -> SlopeFit:
    """Least-squares slope of ln(metric) vs ln(t) inside the window.

    Default window is the last two decades, [t_max / 100, t_max].
    Requires at least 5 recorded checkpoints in the window; nonpositive
    metric values in the window are an error.
    """
    if field not in TRACE_COLUMNS or field == "t":
        raise ValueError(f"unknown metric field {field!r}")
    t = np.asarray(trace.t, dtype=float)
    v = np.asarray(trace.column(field), dtype=float)
    if window is None:
        window = (float(t[-1]) / 100.0, float(t[-1]))
    t_lo, t_hi = float(window[0]), float(window[1])
    if not t_lo < t_hi:
        raise ValueError("window must satisfy t_lo < t_hi")
    inside = (t >= t_lo) & (t <= t_hi) & ~np.isnan(v)
    if np.any(v[inside] <= 0):
        raise ValueError(f"nonpositive {field} values inside the fit window")
    n = int(inside.sum())
    if n < 5:
        raise ValueError(f"need >= 5 checkpoints in window, have {n}")
    x = np.log(t[inside])
    y = np.log(v[inside])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return SlopeFit(
        field=field,
        t_lo=t_lo,
        t_hi=t_hi,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        n_points=n,
    )


def write_slopes(csv_path, fields, window=None) -> Path:
    """Fit the named fields of a trace and write ``<stem>.slopes.json``."""
    csv_path = Path(csv_path)
    trace = read_trace(csv_path)
    fits = [fit_loglog_slope(trace, field, window) for field in fields]
    out = csv_path.with_name(csv_path.stem + ".slopes.json")
    payload = {
        "schema": SLOPES_SCHEMA,
        "trace": csv_path.name,
        "fits": [fit.to_json_dict() for fit in fits],
    }
    _atomic_write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return out


def mk_quantiles_demo(
    target_path,
    t: int,
    seed: int = 0,
    out_csv=None,
    n_points: int = 5000,
) -> Path:
    """Transport-based quantile regions demo.

    Loads a target point cloud, solves against a uniform-ball source,
    then maps ``n_points`` fresh ball samples; each output row holds the
    sample, its ring index floor(10 * ||x||) clamped to [0, 9], and the
    assigned target point.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    target = load_discrete_measure(target_path)
    source = UniformBall(1.0, target.dim)
    config = DragConfig(t_max=t, seed=seed).resolve(source, target)
    state = run_drag(config, source, target)
    g = state.g_bar if state.g_bar is not None else state.g
    gen = RngStream(seed, QUANTILE_STREAM).generator()
    X = source.sample(gen, n_points)
    radius = np.sqrt(np.einsum("nd,nd->n", X, X))
    ring = np.clip(np.floor(10.0 * radius).astype(np.int64), 0, 9)
    mapped = target.points[map_indices(g, target, X)]
    d = target.dim
    header = (
        [f"x{i}" for i in range(d)] + ["ring_index"] + [f"y{i}" for i in range(d)]
    )
    lines = [",".join(header)]
    for i in range(n_points):
        cells = [repr(float(v)) for v in X[i]]
        cells.append(str(int(ring[i])))
        cells.extend(repr(float(v)) for v in mapped[i])
        lines.append(",".join(cells))
    if out_csv is None:
        out_csv = Path(target_path).with_name(Path(target_path).stem + "_quantiles.csv")
    out_csv = Path(out_csv)
    _atomic_write_text(out_csv, "\n".join(lines) + "\n")
    return out_csv


def m_growth_experiment(
    example: int,
    M_list,
    seeds=(0, 1, 2),
    out_dir=None,
) -> list[dict]:
    """Final errors at t = M^2 for increasing M (w_min-dependence probe).

    Returns one record per (M, seed) with final err_g_sq and err_gbar_sq;
    writes ``mgrowth_ex<example>.csv`` when out_dir is given.
    """
    if example not in (1, 3):
        raise ValueError("M-growth experiment is defined for examples 1 and 3")
    M_list = [int(M) for M in M_list]
    if any(m2 <= m1 for m1, m2 in zip(M_list, M_list[1:])):
        raise ValueError("M_list must be strictly increasing")
    rows = []
    for M in M_list:
        t_max = M * M
        source, target, truth = _cached_example(
            example, tuple(sorted({"M": M, **({"d": 10} if example == 1 else {"delta": 0.5})}.items()))
        )
        for seed in seeds:
            config = DragConfig(t_max=t_max, seed=seed).resolve(source, target)
            state = run_drag(config, source, target)
            rows.append(
                {
                    "example": example,
                    "M": M,
                    "t": t_max,
                    "seed": int(seed),
                    "err_g_sq": potential_error_centered(state.g, truth.g_star),
                    "err_gbar_sq": potential_error_centered(state.g_bar, truth.g_star),
                }
            )
    if out_dir is not None:
        header = ["example", "M", "t", "seed", "err_g_sq", "err_gbar_sq"]
        lines = [",".join(header)]
        for r in rows:
            lines.append(
                ",".join(
                    [
                        str(r["example"]),
                        str(r["M"]),
                        str(r["t"]),
                        str(r["seed"]),
                        repr(float(r["err_g_sq"])),
                        repr(float(r["err_gbar_sq"])),
                    ]
                )
            )
        _atomic_write_text(
            Path(out_dir) / f"mgrowth_ex{example}.csv", "\n".join(lines) + "\n"
        )
    return rows


def figure_configs(
    name: str,
    out_dir: str = "results",
    t_max: int | None = None,
    seeds=(0,),
    eval_n_mc: int | None = None,
) -> list[ExperimentConfig]:
    """Config lists for the named benchmark experiments.

    ``fig1``/``fig2`` share runs (cost view vs potential/map view of the
    same traces): the three standard problems with default solver
    settings. ``fig5`` adds log-power weighted averaging (omega = 2,
    M = 1000). ``fig6`` contrasts mini-batching on the random problem.
    ``fig7`` sweeps a and b around the defaults. ``fig8`` pits the
    annealed solver against fixed-regularization sgd/asgd at the
    annealer's final eps. fig3 is the quantiles demo and fig4 the
    M-growth table; both have dedicated entry points.
    """
    base = {"out_dir": out_dir}
    if eval_n_mc is not None:
        base["eval_n_mc_map"] = eval_n_mc
        base["eval_n_mc_cost"] = eval_n_mc
    configs: list[ExperimentConfig] = []
    if name in ("fig1", "fig2"):
        t = 100_000 if t_max is None else t_max
        for seed in seeds:
            for example in (1, 2, 3):
                configs.append(
                    ExperimentConfig(example=example, t_max=t, seed=seed, **base)
                )
    elif name == "fig5":
        t = 100_000 if t_max is None else t_max
        for seed in seeds:
            for example in (1, 3):
                configs.append(
                    ExperimentConfig(
                        example=example, M=1000, omega=2.0, t_max=t, seed=seed, **base
                    )
                )
    elif name == "fig6":
        t = 10_000 if t_max is None else t_max
        for seed in seeds:
            for n_b in (1, 16):
                configs.append(
                    ExperimentConfig(
                        example=2, batch_size=n_b, t_max=t, seed=seed, **base
                    )
                )
    elif name == "fig7":
        t = 10_000 if t_max is None else t_max
        grid = (0.0, 0.6, 0.75, 0.9)
        for seed in seeds:
            for a in grid:
                configs.append(
                    ExperimentConfig(example=2, a=a, b=0.75, t_max=t, seed=seed, **base)
                )
            for b in grid:
                if b == 0.75:
                    continue  # a-sweep already covers (0.75, 0.75)
                configs.append(
                    ExperimentConfig(example=2, a=0.75, b=b, t_max=t, seed=seed, **base)
                )
    elif name == "fig8":
        t = 100_000 if t_max is None else t_max
        eps_final = float(t) ** -0.75
        for seed in seeds:
            configs.append(ExperimentConfig(example=2, t_max=t, seed=seed, **base))
            for algo in ("sgd", "asgd"):
                configs.append(
                    ExperimentConfig(
                        example=2, algorithm=algo, eps=eps_final, t_max=t,
                        seed=seed, **base,
                    )
                )
    else:
        raise ValueError(f"unknown figure {name!r}")
    return configs
