"""Ground-truth potentials, maps, and costs for the benchmark problems.

Closed forms used here:

- Slab problem (example 1): source uniform on [0,1]^d, targets on the
  first-coordinate line at (j - 1/2)/M with uniform weights. By symmetry
  the optimal cells are the equal-width slabs, so the centered optimal
  potential is 0, the map is x -> clamp(ceil(M x_1), 1, M), and the cost
  is 1/(24 M^2) + (d - 1)/24 (slab integral plus the untransported
  variance of the remaining coordinates).
- Monotone 1-D grid (example 3): source uniform on [delta, 1+delta],
  targets k/M with uniform weights. The monotone map is optimal; adjacent
  potential differences follow from indifference at the cell boundaries,
  g_{k+1} - g_k = 1/(2 M^2) - delta/M, and the cost is
  M * (delta^3 - (delta - 1/M)^3) / 6.
- Quantile matching (any 1-D target with sorted atoms, uniform source):
  boundaries accumulate b_j = b_{j-1} + w_j * L; potential differences
  from boundary indifference; cost from exact per-cell cubic integrals.
- MC-weights construction (example 2): draw target points and a potential,
  then *define* the weights as the Monte Carlo masses of that potential's
  cells, making the drawn potential optimal up to the weight-estimation
  error.

All oracles store the mean-centered potential; anchored variants are
derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .measures import DiscreteMeasure, RngStream, UniformBox
from .semidual import c_transform_batch, _chunk_rows

# Stream id for the example-2 construction (points, potential, MC weights).
CONSTRUCT_STREAM = 7


@dataclass
class GroundTruth:
    """Known optimum of one transport problem.

    Fields
    ------
    g_star : mean-centered optimal potential.
    true_map : callable mapping a batch of source points to 0-based target
        indices, or None when unknown.
    true_cost : analytic transport cost when available.
    provenance : JSON-safe description of the construction, sufficient to
        rebuild the map.
    """

    g_star: np.ndarray
    true_map: Callable[[np.ndarray], np.ndarray] | None
    true_cost: float | None
    provenance: dict

    def anchored(self, anchor: int = 0) -> np.ndarray:
        """Representative with g[anchor] = 0."""
        return self.g_star - self.g_star[anchor]


def _centered(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    return g - g.mean()


def _first_coordinate(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        return X
    return X[:, 0]


def _slab_map(M: int) -> Callable[[np.ndarray], np.ndarray]:
    def true_map(X):
        idx = np.ceil(M * _first_coordinate(X)).astype(np.int64) - 1
        return np.clip(idx, 0, M - 1)

    return true_map


def _grid_map_1d(M: int, delta: float) -> Callable[[np.ndarray], np.ndarray]:
    def true_map(X):
        idx = np.ceil(M * (_first_coordinate(X) - delta)).astype(np.int64) - 1
        return np.clip(idx, 0, M - 1)

    return true_map


def _boundary_map(boundaries: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    boundaries = np.asarray(boundaries, dtype=float)
    M = boundaries.size - 1

    def true_map(X):
        idx = np.searchsorted(boundaries, _first_coordinate(X), side="left") - 1
        return np.clip(idx, 0, M - 1)

    return true_map


def _argmin_map(points: np.ndarray, g_star: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    probe = DiscreteMeasure(points=points, weights=np.full(len(points), 1.0 / len(points)))

    def true_map(X):
        return c_transform_batch(g_star, probe, X)[1]

    return true_map


def example1_truth(M: int, d: int) -> GroundTruth:
    """Oracle for the slab problem: g* = 0, slab map, analytic cost."""
    if M < 1 or d < 1:
        raise ValueError("need M >= 1 and d >= 1")
    cost = 1.0 / (24.0 * M * M) + (d - 1) / 24.0
    return GroundTruth(
        g_star=np.zeros(M),
        true_map=_slab_map(M),
        true_cost=cost,
        provenance={"method": "analytic", "family": "example1", "M": M, "d": d},
    )


def example3_truth(M: int, delta: float) -> GroundTruth:
    """Oracle for the monotone 1-D grid problem."""
    if M < 1:
        raise ValueError("need M >= 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    step = 1.0 / (2.0 * M * M) - delta / M
    anchored = np.arange(M) * step
    cost = M * (delta**3 - (delta - 1.0 / M) ** 3) / 6.0
    return GroundTruth(
        g_star=_centered(anchored),
        true_map=_grid_map_1d(M, delta),
        true_cost=cost,
        provenance={"method": "analytic", "family": "example3", "M": M, "delta": delta},
    )


def quantile_oracle_1d(source: UniformBox, target: DiscreteMeasure) -> GroundTruth:
    """Oracle for any sorted 1-D target under a uniform interval source.

    Cell boundaries place mass w_j in cell j; potential differences make
    adjacent scores indifferent at each boundary; the cost integrates
    0.5 (x - y_j)^2 exactly on each cell.
    """
    if not isinstance(source, UniformBox) or source.dim != 1:
        raise ValueError("quantile oracle requires a 1-D uniform box source")
    if target.dim != 1:
        raise ValueError("quantile oracle requires a 1-D target")
    y = target.points[:, 0]
    if np.any(np.diff(y) <= 0):
        raise ValueError("target points must be strictly increasing")
    lo, hi = float(source.lo[0]), float(source.hi[0])
    length = hi - lo
    boundaries = np.concatenate(([lo], lo + length * np.cumsum(target.weights)))
    inner = boundaries[1:-1]
    # indifference at b_j: 0.5 (b - y_j)^2 - g_j = 0.5 (b - y_{j+1})^2 - g_{j+1}
    diffs = 0.5 * ((inner - y[1:]) ** 2 - (inner - y[:-1]) ** 2)
    anchored = np.concatenate(([0.0], np.cumsum(diffs)))
    upper = boundaries[1:] - y
    lower = boundaries[:-1] - y
    cost = float(np.sum(upper**3 - lower**3) / (6.0 * length))
    return GroundTruth(
        g_star=_centered(anchored),
        true_map=_boundary_map(boundaries),
        true_cost=cost,
        provenance={
            "method": "analytic",
            "family": "quantile_1d",
            "boundaries": [float(b) for b in boundaries],
        },
    )


def example2_construct(
    M: int,
    d: int,
    seed: int,
    n_weight_mc: int,
    g_scale: float = 0.05,
    max_redraws: int = 10,
    radius_hint: float | None = None,
) -> tuple[DiscreteMeasure, GroundTruth]:
    """Random problem whose optimum is known by construction.

    Draws M uniform points in [0,1]^d and a potential uniform in
    [-g_scale, g_scale]^M (centered), then estimates the weights as the
    Monte Carlo masses of the potential's cells over ``n_weight_mc``
    uniform samples. If any cell receives no samples the potential is
    redrawn, up to ``max_redraws`` times.
    """
    if M < 1 or d < 1:
        raise ValueError("need M >= 1 and d >= 1")
    if n_weight_mc < 1:
        raise ValueError("n_weight_mc must be >= 1")
    gen = RngStream(seed, CONSTRUCT_STREAM).generator()
    points = gen.random((M, d))
    probe = DiscreteMeasure(points=points, weights=np.full(M, 1.0 / M))
    step = _chunk_rows(M, d)
    attempts = 0
    while True:
        attempts += 1
        g_star = _centered(gen.uniform(-g_scale, g_scale, M))
        counts = np.zeros(M, dtype=np.int64)
        done = 0
        while done < n_weight_mc:
            rows = min(step, n_weight_mc - done)
            X = gen.random((rows, d))
            idx = c_transform_batch(g_star, probe, X)[1]
            counts += np.bincount(idx, minlength=M)
            done += rows
        if np.all(counts > 0):
            break
        if attempts > max_redraws:
            raise RuntimeError(
                f"no potential with all cells occupied after {attempts} draws"
            )
    weights = counts / float(n_weight_mc)
    target = DiscreteMeasure(points=points, weights=weights, radius_hint=radius_hint)
    truth = GroundTruth(
        g_star=g_star,
        true_map=_argmin_map(points, g_star),
        true_cost=None,
        provenance={
            "method": "mc_weights",
            "family": "example2",
            "M": M,
            "d": d,
            "seed": seed,
            "n_weight_mc": n_weight_mc,
            "g_scale": g_scale,
            "attempts": attempts,
        },
    )
    return target, truth


def ground_truth_to_json(target: DiscreteMeasure, truth: GroundTruth) -> dict:
    """JSON-safe bundle of a problem's target measure and its oracle."""
    return {
        "schema": "sdot-truth-1",
        "points": [[float(v) for v in row] for row in target.points],
        "weights": [float(w) for w in target.weights],
        "radius_hint": float(target.radius_hint),
        "g_star": [float(v) for v in truth.g_star],
        "true_cost": None if truth.true_cost is None else float(truth.true_cost),
        "provenance": truth.provenance,
    }


def ground_truth_from_json(obj: dict) -> tuple[DiscreteMeasure, GroundTruth]:
    """Rebuild the (target, truth) pair serialized by :func:`ground_truth_to_json`.

    The map is reconstructed from the provenance: closed forms for the
    analytic families, cell boundaries for the quantile oracle, and the
    stored potential's argmin otherwise.
    """
    if obj.get("schema") != "sdot-truth-1":
        raise ValueError("not a serialized ground truth")
    target = DiscreteMeasure(
        points=np.asarray(obj["points"], dtype=float),
        weights=np.asarray(obj["weights"], dtype=float),
        radius_hint=obj.get("radius_hint"),
    )
    g_star = np.asarray(obj["g_star"], dtype=float)
    prov = dict(obj.get("provenance", {}))
    family = prov.get("family")
    if family == "example1":
        true_map = _slab_map(int(prov["M"]))
    elif family == "example3":
        true_map = _grid_map_1d(int(prov["M"]), float(prov["delta"]))
    elif family == "quantile_1d":
        true_map = _boundary_map(np.asarray(prov["boundaries"], dtype=float))
    else:
        true_map = _argmin_map(target.points, g_star)
    true_cost = obj.get("true_cost")
    return target, GroundTruth(
        g_star=g_star,
        true_map=true_map,
        true_cost=None if true_cost is None else float(true_cost),
        provenance=prov,
    )
