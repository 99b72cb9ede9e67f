"""Semi-dual numerics for semi-discrete optimal transport.

Everything here is a pure function of a potential ``g`` (one real per
target point), a :class:`~sdot.measures.DiscreteMeasure` target, and
source points. Cost convention: c(x, y) = 0.5 * ||x - y||^2.

The hard c-transform is ``min_j [ c(x, y_j) - g_j ]``; the entropic
(c, eps)-transform is its soft-min

    -eps * log( sum_j w_j * exp( (g_j - c(x, y_j)) / eps ) ),

computed with max-shifted exponents so values stay finite down to
eps = 1e-8. Weights enter as multiplicative factors after the shift
(equivalent to adding log w_j to the shifted exponent), which keeps the
shifted sum in [w_min, 1].

The per-sample semi-dual integrand is

    h(x, g) = -g^{c,eps}(x) - sum_j g_j w_j,

whose expectation over the source is the semi-dual objective, and whose
gradient in g is ``soft_assignment(x) - w``.
"""

from __future__ import annotations

import numpy as np

from .measures import DiscreteMeasure, SourceSpec, UniformBox

# Evaluation loops work on row blocks of roughly this many matrix elements;
# the block size is a fixed function of (M, d) so chunked sampling and
# reductions are reproducible for a given problem shape.
_CHUNK_ELEMENTS = 1 << 22


def _chunk_rows(n_atoms: int, dim: int) -> int:
    return max(1, _CHUNK_ELEMENTS // max(1, n_atoms * dim))


def _as_points(x, dim: int) -> np.ndarray:
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {X.shape}")
    return X


def _check_potential(g, n_atoms: int) -> np.ndarray:
    g = np.asarray(g, dtype=float).ravel()
    if g.size != n_atoms:
        raise ValueError(f"potential length {g.size} != number of atoms {n_atoms}")
    if not np.all(np.isfinite(g)):
        raise ValueError("potential entries must be finite")
    return g


def _half_sqdist(X: np.ndarray, points: np.ndarray) -> np.ndarray:
    # explicit differences (no BLAS): bit-reproducible and cancellation-free
    diff = X[:, None, :] - points[None, :, :]
    return 0.5 * np.einsum("nmd,nmd->nm", diff, diff)


def c_transform(g, target: DiscreteMeasure, x) -> tuple[float, int]:
    """Hard c-transform at one point.

    Returns ``(value, argmin_index)`` with value = min_j [c(x,y_j) - g_j]
    and the smallest attaining index on ties (0-based).
    """
    values, indices = c_transform_batch(g, target, _as_points(x, target.dim))
    return float(values[0]), int(indices[0])


def c_transform_batch(g, target: DiscreteMeasure, X) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized hard c-transform: values (n,) and argmin indices (n,)."""
    g = _check_potential(g, target.n_atoms)
    X = _as_points(X, target.dim)
    n = X.shape[0]
    values = np.empty(n)
    indices = np.empty(n, dtype=np.int64)
    step = _chunk_rows(target.n_atoms, target.dim)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        scores = _half_sqdist(X[lo:hi], target.points) - g
        idx = np.argmin(scores, axis=1)  # first minimum: smallest-index tie rule
        indices[lo:hi] = idx
        values[lo:hi] = np.take_along_axis(scores, idx[:, None], axis=1)[:, 0]
    return values, indices


def entropic_c_transform(g, target: DiscreteMeasure, x, eps: float) -> float:
    """Entropic (c, eps)-transform at one point (soft-min of the hard scores)."""
    return float(entropic_c_transform_batch(g, target, _as_points(x, target.dim), eps)[0])


def entropic_c_transform_batch(g, target: DiscreteMeasure, X, eps: float) -> np.ndarray:
    """Vectorized entropic (c, eps)-transform, max-shifted log-sum-exp."""
    _require_positive_eps(eps)
    g = _check_potential(g, target.n_atoms)
    X = _as_points(X, target.dim)
    n = X.shape[0]
    out = np.empty(n)
    step = _chunk_rows(target.n_atoms, target.dim)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        s = (g - _half_sqdist(X[lo:hi], target.points)) / eps
        m = s.max(axis=1)
        z = np.exp(s - m[:, None]) * target.weights
        out[lo:hi] = -eps * (m + np.log(z.sum(axis=1)))
    return out


def soft_assignment(g, target: DiscreteMeasure, x, eps: float) -> np.ndarray:
    """Soft assignment probabilities chi_j(x) over target points.

    chi_j is proportional to w_j * exp((g_j - c(x,y_j))/eps), normalized to
    sum 1; max-shifted so no overflow (and never all-zero) for eps >= 1e-8.
    """
    return soft_assignment_batch(g, target, _as_points(x, target.dim), eps)[0]


def soft_assignment_batch(g, target: DiscreteMeasure, X, eps: float) -> np.ndarray:
    """Soft assignments for a batch of points, shape (n, M).

    Intended for moderate batches (rows are materialized); evaluation
    loops over large samples should chunk their calls.
    """
    _require_positive_eps(eps)
    g = _check_potential(g, target.n_atoms)
    X = _as_points(X, target.dim)
    s = (g - _half_sqdist(X, target.points)) / eps
    s -= s.max(axis=1)[:, None]
    p = np.exp(s) * target.weights
    p /= p.sum(axis=1)[:, None]
    return p


def stochastic_grad(g, target: DiscreteMeasure, x, eps: float) -> np.ndarray:
    """Single-sample gradient of the semi-dual integrand: chi(x) - w.

    Coordinates sum to 0 and the Euclidean norm is at most 2 (difference
    of two probability vectors).
    """
    return soft_assignment(g, target, x, eps) - target.weights


def minibatch_grad(g, target: DiscreteMeasure, batch, eps: float) -> np.ndarray:
    """Arithmetic mean of per-sample gradients over a batch (index order)."""
    batch = _as_points(batch, target.dim)
    if batch.shape[0] < 1:
        raise ValueError("batch must contain at least one point")
    return soft_assignment_batch(g, target, batch, eps).mean(axis=0) - target.weights


def semidual_integrand(g, target: DiscreteMeasure, x, eps: float = 0.0) -> float:
    """Per-sample semi-dual integrand h(x, g); eps=0 uses the hard transform."""
    g = _check_potential(g, target.n_atoms)
    X = _as_points(x, target.dim)
    if eps == 0.0:
        transform = c_transform_batch(g, target, X)[0][0]
    else:
        transform = entropic_c_transform_batch(g, target, X, eps)[0]
    return float(-transform - g @ target.weights)


def semidual_value_mc(
    g,
    target: DiscreteMeasure,
    source: SourceSpec,
    eps: float,
    n_mc: int,
    gen: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo estimate of the semi-dual objective E[h(X, g)].

    Returns ``(estimate, std_error)`` over ``n_mc`` i.i.d. draws from the
    source, consumed in fixed-size blocks.
    """
    g = _check_potential(g, target.n_atoms)
    if n_mc < 2:
        raise ValueError("n_mc must be >= 2")
    gw = float(g @ target.weights)
    values = np.empty(n_mc)
    step = _chunk_rows(target.n_atoms, target.dim)
    for lo in range(0, n_mc, step):
        hi = min(n_mc, lo + step)
        X = source.sample(gen, hi - lo)
        if eps == 0.0:
            transform = c_transform_batch(g, target, X)[0]
        else:
            transform = entropic_c_transform_batch(g, target, X, eps)
        values[lo:hi] = -transform - gw
    estimate = float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(n_mc))
    return estimate, std_error


def laguerre_masses_1d(g, target: DiscreteMeasure, lo: float, hi: float) -> np.ndarray:
    """Exact masses of the 1D Laguerre cells under a uniform density on [lo, hi].

    Requires strictly increasing 1-D target points. Cell boundaries come
    from the lower envelope of the lines obtained by dropping the common
    0.5*x^2 term from the scores, so the masses are exact (no grid).
    """
    g = _check_potential(g, target.n_atoms)
    if target.dim != 1:
        raise ValueError("laguerre_masses_1d requires a 1-D target")
    y = target.points[:, 0]
    if np.any(np.diff(y) <= 0):
        raise ValueError("target points must be strictly increasing")
    if not hi > lo:
        raise ValueError("need hi > lo")
    # line j: (0.5*y_j^2 - g_j) - y_j * x; slopes strictly decrease with j
    intercept = 0.5 * y * y - g
    active: list[int] = [0]
    starts: list[float] = [-np.inf]
    for j in range(1, y.size):
        while active:
            i = active[-1]
            x_int = (intercept[j] - intercept[i]) / (y[j] - y[i])
            if x_int <= starts[-1]:
                active.pop()
                starts.pop()
            else:
                active.append(j)
                starts.append(x_int)
                break
        if not active:
            active, starts = [j], [-np.inf]
    masses = np.zeros(y.size)
    length = hi - lo
    bounds = starts[1:] + [np.inf]
    for j, left, right in zip(active, starts, bounds):
        overlap = min(right, hi) - max(left, lo)
        if overlap > 0:
            masses[j] += overlap / length
    return masses


def grad_quadrature_1d(
    g, target: DiscreteMeasure, source: SourceSpec, eps: float, n_grid: int
) -> np.ndarray:
    """Deterministic gradient of the semi-dual objective for 1-D uniform sources.

    eps > 0: composite trapezoid of ``soft_assignment(x) - w`` on an
    ``n_grid``-point grid over the support. eps = 0: the integrand is
    piecewise constant on the Laguerre cells, so the cell masses are
    integrated exactly and ``n_grid`` is not consulted (a boundary-blind
    grid rule would stall at O(1/n_grid) error across the jumps).
    """
    g = _check_potential(g, target.n_atoms)
    if not isinstance(source, UniformBox) or source.dim != 1:
        raise ValueError("grad_quadrature_1d requires a 1-D uniform box source")
    lo, hi = float(source.lo[0]), float(source.hi[0])
    if eps == 0.0:
        return laguerre_masses_1d(g, target, lo, hi) - target.weights
    if n_grid < 2:
        raise ValueError("n_grid must be >= 2 for eps > 0")
    grid = np.linspace(lo, hi, n_grid)
    acc = np.zeros(target.n_atoms)
    step = _chunk_rows(target.n_atoms, 1)
    for start in range(0, n_grid, step):
        stop = min(n_grid, start + step)
        chi = soft_assignment_batch(g, target, grid[start:stop, None], eps)
        coeff = np.ones(stop - start)
        if start == 0:
            coeff[0] = 0.5
        if stop == n_grid:
            coeff[-1] = 0.5
        acc += np.einsum("n,nm->m", coeff, chi)
    return acc / (n_grid - 1) - target.weights


def _require_positive_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
