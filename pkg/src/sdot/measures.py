"""Source and target measures: sampling specs, discrete targets, ingestion.

The source measure mu is a continuous distribution described by a
:class:`SourceSpec` (uniform box, shifted unit interval, or uniform ball),
carrying a support radius bound ``radius_bound`` and Holder-regularity
metadata. The target measure nu is a :class:`DiscreteMeasure`: M support
points with strictly positive simplex weights.

Randomness goes through :class:`RngStream`, a counter-based Philox
generator keyed by ``(seed, stream_id)``. Identical keys reproduce
bitwise-identical sample sequences; distinct stream ids give independent
streams, so concurrent consumers each own a stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class PointCloudError(ValueError):
    """Point-cloud file violates the CSV contract."""


class MalformedRowError(PointCloudError):
    """Row is not a comma-separated list of numbers."""


class DimensionMismatchError(PointCloudError):
    """Rows disagree on the number of coordinate columns."""


class NonpositiveWeightError(PointCloudError):
    """A weight entry is zero or negative."""


class WeightSumError(PointCloudError):
    """Weights deviate from sum 1 by more than the ingestion tolerance."""


# Weights within this distance of 1 are renormalized; beyond it the file is
# rejected. Stricter would reject legitimately rounded files.
WEIGHT_SUM_TOLERANCE = 1e-6

_SIMPLEX_ATOL = 1e-12


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible random stream.

    Parameters
    ----------
    seed : int
        64-bit base seed shared by all streams of one run.
    stream_id : int
        Distinguishes independent streams derived from the same seed.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of the stream.

        Every call restarts the stream, which is what checkpoint
        evaluation wants: common random numbers across checkpoints.
        """
        key = [self.seed % 2**64, self.stream_id % 2**64]
        return np.random.Generator(np.random.Philox(key=key))


class SourceSpec:
    """Sampleable continuous source distribution with bounded support.

    Attributes
    ----------
    dim : int
        Ambient dimension d.
    radius_bound : float
        R such that the support lies in the centered ball B(0, R).
    holder_alpha : float
        Density regularity exponent in (0, 1]; metadata only.
    """

    dim: int
    radius_bound: float
    holder_alpha: float = 1.0

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        """Draw ``n`` i.i.d. points, shape (n, dim)."""
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of rows inside the declared support."""
        raise NotImplementedError


class UniformBox(SourceSpec):
    """Uniform distribution on an axis-aligned box [lo, hi]."""

    def __init__(self, lo, hi, holder_alpha: float = 1.0):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lo and hi must be 1-D arrays of equal length")
        if not np.all(lo < hi):
            raise ValueError("box requires lo < hi componentwise")
        self.lo = lo
        self.hi = hi
        self.dim = lo.size
        # farthest corner of the box from the origin
        self.radius_bound = float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))
        self.holder_alpha = float(holder_alpha)

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        u = gen.random((n, self.dim))
        return self.lo + (self.hi - self.lo) * u

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        return np.all((points >= self.lo) & (points <= self.hi), axis=1)

    def __repr__(self) -> str:
        return f"UniformBox(lo={self.lo.tolist()}, hi={self.hi.tolist()})"


def shifted_interval(delta: float) -> UniformBox:
    """Uniform source on [delta, 1 + delta] (1-D), delta >= 0."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return UniformBox([delta], [1.0 + delta])


class UniformBall(SourceSpec):
    """Uniform distribution on a centered Euclidean ball.

    Sampling uses a normalized Gaussian direction times radius * U^(1/d),
    which is uniform on the ball.
    """

    def __init__(self, radius: float, dim: int, holder_alpha: float = 1.0):
        if radius <= 0:
            raise ValueError("radius must be > 0")
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.radius = float(radius)
        self.dim = int(dim)
        self.radius_bound = float(radius)
        self.holder_alpha = float(holder_alpha)

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        z = gen.standard_normal((n, self.dim))
        norms = np.linalg.norm(z, axis=1, keepdims=True)
        # A zero Gaussian vector has probability 0; guard the division anyway.
        norms[norms == 0.0] = 1.0
        r = self.radius * gen.random(n) ** (1.0 / self.dim)
        return z / norms * r[:, None]

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        return np.linalg.norm(points, axis=1) <= self.radius + 1e-12

    def __repr__(self) -> str:
        return f"UniformBall(radius={self.radius}, dim={self.dim})"


@dataclass(eq=False)
class DiscreteMeasure:
    """Discrete target measure: M support points and simplex weights.

    Parameters
    ----------
    points : ndarray of shape (M, d)
        Support points y_j.
    weights : ndarray of shape (M,)
        Strictly positive weights summing to 1 (within 1e-12).
    radius_hint : float, optional
        R bounding every support-point norm; defaults to the max norm.
    """

    points: np.ndarray
    weights: np.ndarray
    radius_hint: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        if points.shape[0] != weights.size:
            raise ValueError("points and weights must have matching length")
        if points.shape[0] < 1:
            raise ValueError("need at least one support point")
        if not np.all(np.isfinite(points)):
            raise ValueError("support points must be finite")
        if not np.all(weights > 0):
            raise NonpositiveWeightError("all weights must be strictly positive")
        total = float(weights.sum())
        if abs(total - 1.0) > _SIMPLEX_ATOL:
            raise WeightSumError(
                f"weights must sum to 1 within {_SIMPLEX_ATOL}; got {total!r}"
            )
        max_norm = float(np.linalg.norm(points, axis=1).max())
        radius = self.radius_hint
        if radius is None:
            radius = max_norm
        elif max_norm > radius + 1e-12:
            raise ValueError(
                f"radius_hint {radius} does not bound the support (max norm {max_norm})"
            )
        points.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "radius_hint", float(radius))

    @property
    def n_atoms(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def w_min(self) -> float:
        return float(self.weights.min())


def load_discrete_measure(path) -> DiscreteMeasure:
    """Load a discrete measure from a point-cloud CSV.

    Format: UTF-8, one row per support point, d coordinate columns then one
    weight column, optional header lines starting with '#'. Weights are
    renormalized when they sum to 1 within 1e-6, rejected otherwise.
    """
    path = Path(path)
    rows: list[list[float]] = []
    width = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            try:
                values = [float(c) for c in cells]
            except ValueError as exc:
                raise MalformedRowError(f"{path}:{lineno}: {exc}") from None
            if width is None:
                width = len(values)
                if width < 2:
                    raise DimensionMismatchError(
                        f"{path}:{lineno}: need at least one coordinate and a weight"
                    )
            elif len(values) != width:
                raise DimensionMismatchError(
                    f"{path}:{lineno}: expected {width} columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise PointCloudError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    points, weights = data[:, :-1], data[:, -1]
    if np.any(weights <= 0):
        raise NonpositiveWeightError(f"{path}: weights must be strictly positive")
    total = float(weights.sum())
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise WeightSumError(
            f"{path}: weights sum to {total!r}, outside 1 +/- {WEIGHT_SUM_TOLERANCE}"
        )
    return DiscreteMeasure(points=points, weights=weights / total)


def save_discrete_measure(measure: DiscreteMeasure, path, header: str | None = None) -> Path:
    """Write a measure in the point-cloud CSV format (inverse of the loader)."""
    path = Path(path)
    lines = []
    if header:
        lines.append("# " + header)
    for point, w in zip(measure.points, measure.weights):
        lines.append(",".join(repr(float(v)) for v in point) + "," + repr(float(w)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def make_example(example_id: int, **params):
    """Construct one of the three benchmark problems.

    Returns ``(source, target, truth)``.

    - ``1``: uniform source on [0,1]^d, targets on the first-coordinate
      line at ((j - 1/2)/M, 1/2, ..., 1/2), uniform weights. Params:
      ``M`` (default 100), ``d`` (default 10).
    - ``2``: M uniform random points in [0,1]^d with weights estimated by
      Monte Carlo so a drawn potential is optimal. Params: ``M`` (30),
      ``d`` (10), ``seed`` (0), ``n_weight_mc`` (10**7), ``g_scale``.
    - ``3``: uniform source on [delta, 1+delta], targets k/M with uniform
      weights. Params: ``M`` (default 1000), ``delta`` (default 0.5).
    """
    from . import oracles  # local import: oracles builds on this module

    if example_id == 1:
        M = int(params.pop("M", 100))
        d = int(params.pop("d", 10))
        _reject_extra(params)
        if d < 1:
            raise ValueError("example 1 requires d >= 1")
        source = UniformBox(np.zeros(d), np.ones(d))
        first = (np.arange(M) + 0.5) / M
        points = np.full((M, d), 0.5)
        points[:, 0] = first
        target = DiscreteMeasure(
            points=points,
            weights=np.full(M, 1.0 / M),
            radius_hint=source.radius_bound,
        )
        return source, target, oracles.example1_truth(M, d)
    if example_id == 2:
        M = int(params.pop("M", 30))
        d = int(params.pop("d", 10))
        seed = int(params.pop("seed", 0))
        n_weight_mc = int(params.pop("n_weight_mc", 10**7))
        g_scale = float(params.pop("g_scale", 0.05))
        _reject_extra(params)
        source = UniformBox(np.zeros(d), np.ones(d))
        target, truth = oracles.example2_construct(
            M, d, seed=seed, n_weight_mc=n_weight_mc, g_scale=g_scale,
            radius_hint=source.radius_bound,
        )
        return source, target, truth
    if example_id == 3:
        M = int(params.pop("M", 1000))
        delta = float(params.pop("delta", 0.5))
        d = int(params.pop("d", 1))
        _reject_extra(params)
        if d != 1:
            raise ValueError("example 3 requires d = 1")
        source = shifted_interval(delta)
        points = ((np.arange(M) + 1.0) / M)[:, None]
        target = DiscreteMeasure(
            points=points,
            weights=np.full(M, 1.0 / M),
            radius_hint=max(1.0, source.radius_bound),
        )
        return source, target, oracles.example3_truth(M, delta)
    raise ValueError(f"unknown example id {example_id!r}")


def _reject_extra(params: dict) -> None:
    if params:
        raise ValueError(f"unexpected example params: {sorted(params)}")
