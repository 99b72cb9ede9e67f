"""Log-log convergence figures from sdot trace CSVs.

The renderer draws one curve per input trace, dashed reference power
laws anchored at the first curve's final data point, and — when a trace
ships a ``.slopes.json`` sidecar — annotates the curve with that fitted
slope verbatim (this module never refits; the solver harness owns the
numbers). Every render writes the image in both a vector and a raster
format plus a small ``.annotations.json`` sidecar recording exactly
what was drawn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .render import CURVE_COLORS, REFERENCE_COLOR, new_axes, save_figure
from .traces import TraceData, load_trace

ANNOTATIONS_SCHEMA = "sdot-plot-annotations-1"


@dataclass(frozen=True)
class ConvergenceSpec:
    """What to plot: traces, metric column, references, and output path."""

    traces: tuple[str, ...]
    out: str
    field: str = "err_gbar_sq"
    reference_slopes: tuple[float, ...] = ()
    title: str | None = None
    xlabel: str = "iteration t"
    ylabel: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "traces", tuple(str(p) for p in self.traces))
        object.__setattr__(
            self, "reference_slopes", tuple(float(s) for s in self.reference_slopes)
        )
        if not self.traces:
            raise ValueError("at least one trace CSV is required")
        if not self.field or self.field == "t":
            raise ValueError("field must name a metric column")

    def to_json_dict(self) -> dict:
        return {
            "traces": list(self.traces),
            "out": self.out,
            "field": self.field,
            "reference_slopes": list(self.reference_slopes),
            "title": self.title,
            "xlabel": self.xlabel,
            "ylabel": self.ylabel,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConvergenceSpec":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown plot-spec fields: {sorted(extra)}")
        if "traces" not in data or "out" not in data:
            raise ValueError("plot spec needs 'traces' and 'out'")
        kwargs = dict(data)
        kwargs["traces"] = tuple(kwargs["traces"])
        kwargs["reference_slopes"] = tuple(kwargs.get("reference_slopes", ()))
        return cls(**kwargs)


@dataclass(frozen=True)
class CurveAnnotation:
    trace: str
    label: str
    slope: float | None
    source: str  # "sidecar" when copied from <stem>.slopes.json, else "none"


def _positive_series(trace: TraceData, field: str) -> tuple[np.ndarray, np.ndarray]:
    values = trace.column(field)
    mask = np.isfinite(values) & (values > 0) & (trace.t > 0)
    if not mask.any():
        raise ValueError(
            f"{trace.path}: column {field!r} has no positive finite values to plot"
        )
    return trace.t[mask].astype(float), values[mask]


def render_convergence(spec: ConvergenceSpec) -> tuple[Path, ...]:
    """Render the figure; returns the written image paths (vector+raster)."""
    traces = [load_trace(p) for p in spec.traces]
    series = [_positive_series(tr, spec.field) for tr in traces]

    ax, finish = new_axes()
    annotations: list[CurveAnnotation] = []
    for i, (tr, (t, v)) in enumerate(zip(traces, series)):
        color = CURVE_COLORS[i % len(CURVE_COLORS)]
        slope = tr.fitted_slope(spec.field)
        label = tr.label
        if slope is not None:
            label = f"{label} (slope {slope:.3f})"
        ax.loglog(t, v, color=color, linewidth=1.6, label=label)
        annotations.append(
            CurveAnnotation(
                trace=str(tr.path),
                label=tr.label,
                slope=slope,
                source="sidecar" if slope is not None else "none",
            )
        )

    # Reference power laws pass through the first curve's final point.
    t0, v0 = series[0]
    t_lo = min(float(t.min()) for t, _ in series)
    anchor_t, anchor_v = float(t0[-1]), float(v0[-1])
    ref_t = np.geomspace(t_lo, anchor_t, 64)
    for s in spec.reference_slopes:
        ax.loglog(
            ref_t,
            anchor_v * (ref_t / anchor_t) ** s,
            color=REFERENCE_COLOR,
            linestyle="--",
            linewidth=1.1,
            label=f"slope {s:g}",
        )

    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel if spec.ylabel is not None else spec.field)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, which="both", alpha=0.25)

    written = save_figure(finish, spec.out)
    _write_annotations(spec, annotations)
    return written


def annotations_path(out) -> Path:
    out = Path(out)
    return out.with_name(f"{out.stem}.annotations.json")


def _write_annotations(spec: ConvergenceSpec, curves: list[CurveAnnotation]) -> None:
    payload = {
        "schema": ANNOTATIONS_SCHEMA,
        "field": spec.field,
        "reference_slopes": list(spec.reference_slopes),
        "curves": [
            {
                "trace": c.trace,
                "label": c.label,
                "slope": c.slope,
                "source": c.source,
            }
            for c in curves
        ],
    }
    path = annotations_path(spec.out)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
