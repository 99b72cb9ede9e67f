"""Read-only access to the sdot benchmark file contracts.

This package never imports the solver library; it consumes the files the
benchmark harness writes:

- ``<label>.csv`` — checkpoint table, header ``t,eps,gamma,...``; empty
  cells mean "metric not recorded" and parse as NaN.
- ``<label>.meta.json`` — run metadata (schema ``sdot-trace-1``); the
  resolved label is used for legends.
- ``<label>.slopes.json`` — power-law fits (schema ``sdot-slopes-1``);
  annotations reuse these fitted slopes verbatim rather than refitting.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

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

TRACE_SCHEMA = "sdot-trace-1"
SLOPES_SCHEMA = "sdot-slopes-1"


@dataclass(frozen=True)
class TraceData:
    """One loaded trace: checkpoint axis, metric columns, and sidecars."""

    path: Path
    t: np.ndarray
    columns: dict[str, np.ndarray]
    meta: dict | None
    slopes: dict | None

    @property
    def label(self) -> str:
        if self.meta is not None:
            resolved = self.meta.get("resolved", {})
            if isinstance(resolved, dict) and resolved.get("label"):
                return str(resolved["label"])
        return self.path.stem

    def column(self, field: str) -> np.ndarray:
        if field == "t":
            return self.t
        if field not in self.columns:
            raise ValueError(f"{self.path}: no column {field!r}")
        return self.columns[field]

    def fitted_slope(self, field: str) -> float | None:
        """The bench-fitted slope for ``field``, if the sidecar has one."""
        if self.slopes is None:
            return None
        for fit in self.slopes.get("fits", ()):
            if fit.get("field") == field:
                return float(fit["slope"])
        return None


def sidecar(csv_path: Path, kind: str) -> Path:
    return csv_path.with_name(f"{csv_path.stem}.{kind}.json")


def load_trace(csv_path) -> TraceData:
    """Load a trace CSV plus its meta/slopes sidecars when present."""
    csv_path = Path(csv_path)
    with csv_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRACE_COLUMNS:
            raise ValueError(
                f"{csv_path}: not a trace CSV (header {header!r})"
            )
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{csv_path}: trace has no checkpoints")
    t = np.array([int(row[0]) for row in rows], dtype=np.int64)
    columns = {
        name: np.array(
            [math.nan if row[j] == "" else float(row[j]) for row in rows]
        )
        for j, name in enumerate(TRACE_COLUMNS[1:], start=1)
    }

    meta = None
    meta_path = sidecar(csv_path, "meta")
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))

    slopes = None
    slopes_path = sidecar(csv_path, "slopes")
    if slopes_path.exists():
        slopes = json.loads(slopes_path.read_text(encoding="utf-8"))
        if slopes.get("schema") != SLOPES_SCHEMA:
            raise ValueError(
                f"{slopes_path}: unexpected schema {slopes.get('schema')!r}"
            )

    return TraceData(path=csv_path, t=t, columns=columns, meta=meta, slopes=slopes)


def load_quantiles_csv(csv_path) -> dict[str, np.ndarray]:
    """Load a quantiles-demo CSV into named arrays.

    Expects a header of ``x0..x{d-1},ring_index,y0..y{d-1}``; returns
    ``{"x": (n, d), "ring": (n,), "y": (n, d)}``.
    """
    csv_path = Path(csv_path)
    with csv_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{csv_path}: empty file")
        rows = [row for row in reader if row]
    if "ring_index" not in header:
        raise ValueError(f"{csv_path}: no ring_index column")
    ring_at = header.index("ring_index")
    x_names = header[:ring_at]
    y_names = header[ring_at + 1 :]
    if (
        not x_names
        or len(x_names) != len(y_names)
        or x_names != [f"x{i}" for i in range(len(x_names))]
        or y_names != [f"y{i}" for i in range(len(y_names))]
    ):
        raise ValueError(f"{csv_path}: malformed quantiles header {header!r}")
    if not rows:
        raise ValueError(f"{csv_path}: no data rows")
    try:
        body = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise ValueError(f"{csv_path}: non-numeric cell ({exc})") from None
    if body.shape[1] != len(header):
        raise ValueError(f"{csv_path}: ragged rows")
    ring = body[:, ring_at].astype(np.int64)
    if np.any(ring < 0) or np.any(ring > 9):
        raise ValueError(f"{csv_path}: ring_index outside [0, 9]")
    return {
        "x": body[:, :ring_at],
        "ring": ring,
        "y": body[:, ring_at + 1 :],
    }
