"""Axis-aligned projection sets for the solver iterates.

Both admissible sets are boxes (one possibly with a pinned coordinate),
so the Euclidean projection is coordinate clipping: cheap, idempotent,
and non-expansive.

- :class:`BoxProjection`: [0, 2R^2]^M, the loose set valid for any
  anchor-free potential.
- :class:`AnchoredProjection`: {g : g_anchor = 0, |g_j| <= R*||y_anchor - y_j||},
  the tight set containing the unique anchored optimum; the default for
  solver runs.
"""

from __future__ import annotations

import numpy as np

from .measures import DiscreteMeasure


class ProjectionSet:
    """Euclidean projection onto an axis-aligned admissible set."""

    lower: np.ndarray
    upper: np.ndarray

    def project(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=float).ravel()
        if g.size != self.lower.size:
            raise ValueError(f"potential length {g.size} != set dimension {self.lower.size}")
        return np.clip(g, self.lower, self.upper)

    def contains(self, g, atol: float = 1e-12) -> bool:
        g = np.asarray(g, dtype=float).ravel()
        return bool(np.all(g >= self.lower - atol) & np.all(g <= self.upper + atol))

    @property
    def diameter(self) -> float:
        """Largest Euclidean distance between two points of the set."""
        return float(np.linalg.norm(self.upper - self.lower))


class BoxProjection(ProjectionSet):
    """The cube [0, 2R^2]^M; diameter 2R^2 * sqrt(M)."""

    def __init__(self, radius_bound: float, n_atoms: int):
        if radius_bound <= 0:
            raise ValueError("radius_bound must be > 0")
        if n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        self.radius_bound = float(radius_bound)
        self.lower = np.zeros(n_atoms)
        self.upper = np.full(n_atoms, 2.0 * radius_bound**2)


class AnchoredProjection(ProjectionSet):
    """{g : g_anchor = 0, |g_j| <= R * ||y_anchor - y_j||}.

    The anchor coordinate is pinned to 0 (the additive gauge of the
    potential), the rest clipped into symmetric per-coordinate bounds.
    Anchor index is 0-based; the first point by convention.
    """

    def __init__(self, radius_bound: float, target: DiscreteMeasure, anchor: int = 0):
        if radius_bound <= 0:
            raise ValueError("radius_bound must be > 0")
        M = target.n_atoms
        if not 0 <= anchor < M:
            raise ValueError(f"anchor {anchor} out of range for {M} atoms")
        self.radius_bound = float(radius_bound)
        self.anchor = int(anchor)
        gaps = target.points - target.points[anchor]
        bound = radius_bound * np.sqrt(np.einsum("md,md->m", gaps, gaps))
        self.lower = -bound
        self.upper = bound.copy()
        self.lower[anchor] = 0.0
        self.upper[anchor] = 0.0

    def project(self, g) -> np.ndarray:
        out = super().project(g)
        out[self.anchor] = 0.0
        return out


class NoProjection(ProjectionSet):
    """Identity projection (unconstrained iterates); diameter infinite."""

    def __init__(self, n_atoms: int):
        if n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        self.lower = np.full(n_atoms, -np.inf)
        self.upper = np.full(n_atoms, np.inf)

    def project(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=float).ravel()
        if g.size != self.lower.size:
            raise ValueError(f"potential length {g.size} != set dimension {self.lower.size}")
        return g.copy()

    @property
    def diameter(self) -> float:
        return float("inf")


def make_projection(
    kind: str,
    target: DiscreteMeasure,
    radius_bound: float,
    anchor: int = 0,
) -> ProjectionSet:
    """Build a projection set by name: 'anchored', 'box', or 'none'."""
    if kind == "anchored":
        return AnchoredProjection(radius_bound, target, anchor=anchor)
    if kind == "box":
        return BoxProjection(radius_bound, target.n_atoms)
    if kind == "none":
        return NoProjection(target.n_atoms)
    raise ValueError(f"unknown projection kind {kind!r}")
