"""Deterministic matplotlib rendering shared by the figure modules.

Figures are built directly on :class:`matplotlib.figure.Figure` (no
pyplot, no global state) and written with timestamp metadata stripped
and a fixed SVG hash salt, so rendering the same inputs twice produces
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

# tab10, spelled out so the palette cannot drift with rcParams.
CURVE_COLORS = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)
REFERENCE_COLOR = "#555555"

_HASH_SALT = "sdot-plots"
_RASTER_DPI = 150

_VECTOR = {".svg", ".pdf"}
_RASTER = {".png"}


def new_axes(figsize: tuple[float, float] = (7.0, 5.0)):
    """A fresh figure/axes pair detached from any global backend state."""
    fig = Figure(figsize=figsize, constrained_layout=True)
    ax = fig.subplots()
    return ax, fig


def companion_path(out: Path) -> Path:
    """The second output format: vector for a raster path and vice versa."""
    if out.suffix in _RASTER:
        return out.with_suffix(".svg")
    return out.with_suffix(".png")


def _save_one(fig: Figure, path: Path) -> None:
    suffix = path.suffix
    if suffix == ".svg":
        with matplotlib.rc_context({"svg.hashsalt": _HASH_SALT}):
            fig.savefig(path, format="svg", metadata={"Date": None})
    elif suffix == ".pdf":
        fig.savefig(
            path,
            format="pdf",
            metadata={"CreationDate": None, "ModDate": None},
        )
    elif suffix == ".png":
        fig.savefig(path, format="png", dpi=_RASTER_DPI)
    else:
        raise ValueError(f"unsupported image format {suffix!r} (use png/svg/pdf)")


def save_figure(fig: Figure, out) -> tuple[Path, ...]:
    """Write ``out`` plus its companion format; returns the written paths."""
    out = Path(out)
    if out.suffix not in _VECTOR | _RASTER:
        raise ValueError(f"unsupported image format {out.suffix!r} (use png/svg/pdf)")
    out.parent.mkdir(parents=True, exist_ok=True)
    paths = (out, companion_path(out))
    for path in paths:
        _save_one(fig, path)
    return paths
