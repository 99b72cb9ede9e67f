"""Colored scatter of mapped points from a quantiles-demo CSV.

The CSV (written by the solver CLI's ``quantiles`` subcommand) has one
row per source sample: source coordinates ``x0..``, a ``ring_index`` in
[0, 9] identifying which spherical shell the sample came from (ring 0
innermost), and the mapped target coordinates ``y0..``. The figure
scatters the mapped points, one fixed color per ring, with a legend
entry for every ring present.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .render import CURVE_COLORS, new_axes, save_figure
from .traces import load_quantiles_csv

RING_COLORS = CURVE_COLORS  # ten rings, ten colors


def render_quantiles(
    csv_path,
    out,
    title: str | None = None,
    point_size: float = 4.0,
) -> tuple[Path, ...]:
    """Render the ring scatter; returns the written image paths."""
    data = load_quantiles_csv(csv_path)
    y = data["y"]
    ring = data["ring"]
    if y.shape[1] != 2:
        raise ValueError(
            f"{csv_path}: can only plot 2-D mapped points (got d={y.shape[1]})"
        )

    ax, fig = new_axes(figsize=(6.0, 6.0))
    for r in np.unique(ring):
        sel = ring == r
        ax.scatter(
            y[sel, 0],
            y[sel, 1],
            s=point_size,
            color=RING_COLORS[int(r)],
            label=f"ring {int(r)}",
            linewidths=0,
        )
    ax.set_aspect("equal")
    ax.set_xlabel("y0")
    ax.set_ylabel("y1")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8, markerscale=2.5)
    return save_figure(fig, out)
