"""Transport map and cost estimators built from a potential, plus the
error metrics used by the benchmark harness.

The hard map sends x to the target point whose Laguerre cell contains it
(the c-transform argmin, smallest index on ties); the entropic map is the
barycentric projection sum_j chi_j(x) y_j. The cost estimator integrates
the c-transform against the source by Monte Carlo and adds the weighted
potential; it equals minus the semi-dual objective estimate at eps = 0.

Error metrics quotient out the additive gauge of potentials by centering
(projection onto the complement of span{1}).
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .measures import DiscreteMeasure, SourceSpec
from .semidual import (
    _as_points,
    _check_potential,
    _chunk_rows,
    c_transform,
    c_transform_batch,
    semidual_value_mc,
    soft_assignment_batch,
)


class TransportAssignment(NamedTuple):
    """Hard assignment of one source point: cell index and target point."""

    index: int
    point: np.ndarray


def map_estimate(g, target: DiscreteMeasure, x) -> TransportAssignment:
    """Hard transport map at one point: y_{j*} with j* the c-transform argmin."""
    _, index = c_transform(g, target, x)
    return TransportAssignment(index=index, point=target.points[index].copy())


def map_indices(g, target: DiscreteMeasure, X) -> np.ndarray:
    """Cell indices of the hard map for a batch of points, shape (n,)."""
    return c_transform_batch(g, target, X)[1]


def map_points(g, target: DiscreteMeasure, X) -> np.ndarray:
    """Images of a batch under the hard map, shape (n, d)."""
    return target.points[map_indices(g, target, X)]


def entropic_map_estimate(g, target: DiscreteMeasure, x, eps: float) -> np.ndarray:
    """Entropic (barycentric) map at one point: sum_j chi_j(x) y_j."""
    return entropic_map_points(g, target, _as_points(x, target.dim), eps)[0]


def entropic_map_points(g, target: DiscreteMeasure, X, eps: float) -> np.ndarray:
    """Entropic map for a batch, shape (n, d); rows lie in the convex hull
    of the target points since the soft assignments are convex weights."""
    X = _as_points(X, target.dim)
    out = np.empty_like(X)
    step = _chunk_rows(target.n_atoms, target.dim)
    for lo in range(0, X.shape[0], step):
        hi = min(X.shape[0], lo + step)
        chi = soft_assignment_batch(g, target, X[lo:hi], eps)
        out[lo:hi] = np.einsum("nm,md->nd", chi, target.points)
    return out


def ot_cost_estimate(
    g,
    source: SourceSpec,
    target: DiscreteMeasure,
    n_mc: int,
    gen: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo transport-cost estimate from a potential.

    Mean of g^c(X) over X ~ source plus sum_j w_j g_j, i.e. minus the
    semi-dual objective estimate at eps = 0; shift-invariant in g.
    Returns ``(estimate, std_error)``.
    """
    value, std_error = semidual_value_mc(g, target, source, 0.0, n_mc, gen)
    return -value, std_error


def potential_error_centered(g, g_star) -> float:
    """Squared Euclidean norm of the mean-centered difference g - g*.

    Centering quotients out the additive constant, so the value is
    invariant to shifting either argument by c * 1.
    """
    g = np.asarray(g, dtype=float).ravel()
    g_star = np.asarray(g_star, dtype=float).ravel()
    if g.size != g_star.size:
        raise ValueError("potentials must have equal length")
    diff = g - g_star
    diff = diff - diff.mean()
    return float(diff @ diff)


def map_error_lp(
    g,
    truth_map: Callable[[np.ndarray], np.ndarray],
    source: SourceSpec,
    target: DiscreteMeasure,
    n_mc: int,
    gen: np.random.Generator,
    p: float = 2.0,
) -> float:
    """Monte Carlo estimate of E[ ||y_jhat(X) - y_jstar(X)||^p ].

    ``truth_map`` maps a batch of points to oracle cell indices; the
    per-sample error is 0 whenever estimated and oracle indices agree.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    g = _check_potential(g, target.n_atoms)
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    total = 0.0
    step = _chunk_rows(target.n_atoms, target.dim)
    for lo in range(0, n_mc, step):
        rows = min(n_mc, lo + step) - lo
        X = source.sample(gen, rows)
        j_hat = c_transform_batch(g, target, X)[1]
        j_star = np.asarray(truth_map(X), dtype=np.int64)
        gap = target.points[j_hat] - target.points[j_star]
        dist = np.sqrt(np.einsum("nd,nd->n", gap, gap))
        total += float((dist**p).sum())
    return total / n_mc


def potential_gap_sampled(g, g_ref, target: DiscreteMeasure, X) -> float:
    """Sampled-max diagnostic of the c-transform gap: max_x |g^c - g_ref^c|."""
    values = c_transform_batch(g, target, X)[0]
    ref = c_transform_batch(g_ref, target, X)[0]
    return float(np.abs(values - ref).max())
