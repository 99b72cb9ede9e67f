"""Shared test plumbing.

Heavy solver runs used by the acceptance tests are cached under
``results/acceptance`` keyed by their config, so a re-run of the suite
reuses them; delete that directory to force fresh runs. The acceptance
tests record one line each, printed in the terminal summary.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from sdot.bench import (
    ExperimentConfig,
    RunTrace,
    _problem,
    _solver_config,
    read_trace,
    run_experiment,
    trace_paths,
)
from sdot.solver import run_drag, run_fixed_eps

ACCEPT_OUT = Path(__file__).resolve().parent.parent / "results" / "acceptance"

# (tag, status, detail) tuples in execution order.
_REPORT: list[tuple[str, str, str]] = []


def record(tag: str, ok: bool, detail: str) -> None:
    """Log one acceptance check line, then assert it."""
    _REPORT.append((tag, "PASS" if ok else "FAIL", detail))
    assert ok, f"{tag}: {detail}"


def record_skip(tag: str, reason: str) -> None:
    _REPORT.append((tag, "SKIP", reason))
    pytest.skip(reason)


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance checks")
    for tag, status, detail in _REPORT:
        terminalreporter.write_line(f"{status:4s} {tag}: {detail}")


def cached_trace(config: ExperimentConfig) -> RunTrace:
    """Run an experiment, or reload it if its artifacts already match."""
    paths = trace_paths(config)
    if paths["csv"].exists() and paths["meta"].exists():
        meta = json.loads(paths["meta"].read_text(encoding="utf-8"))
        if meta.get("config") == config.to_json_dict():
            return read_trace(paths["csv"])
    return run_experiment(config)


def cached_final_potentials(config: ExperimentConfig) -> dict[str, np.ndarray]:
    """Final iterate and averages of the configured run, cached as .npz."""
    cache = Path(config.out_dir) / f"{trace_paths(config)['csv'].stem}.final.npz"
    if cache.exists():
        with np.load(cache) as data:
            return {k: data[k] for k in data.files}
    source, target, _ = _problem(config)
    solver_cfg = _solver_config(config, ()).resolve(source, target)
    if config.algorithm == "drag":
        state = run_drag(solver_cfg, source, target)
    else:
        averaging = "plain" if config.algorithm == "asgd" else "none"
        state = run_fixed_eps(solver_cfg, config.eps, averaging, source, target)
    out = {"g": state.g}
    if state.g_bar is not None:
        out["g_bar"] = state.g_bar
    if state.g_bar_w is not None:
        out["g_bar_w"] = state.g_bar_w
    cache.parent.mkdir(parents=True, exist_ok=True)
    np.savez(cache, **out)
    return out
