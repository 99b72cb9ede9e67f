"""Estimator-style front end for the semi-discrete solvers.

``SemiDiscreteTransport`` follows the scikit-learn protocol: constructor
stores hyperparameters verbatim, ``fit`` learns the dual potential for a
target point cloud, ``transform`` pushes source points onto the targets,
``predict`` returns assigned target indices. Works with ``clone`` and
``get_params``/``set_params``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .estimators import entropic_map_points, map_indices, map_points, ot_cost_estimate
from .measures import DiscreteMeasure, RngStream, SourceSpec, UniformBox
from .solver import DragConfig, run_drag, run_fixed_eps

# Stream id for estimate_cost draws, distinct from the solver's stream.
COST_STREAM = 3


class SemiDiscreteTransport(TransformerMixin, BaseEstimator):
    """Semi-discrete optimal transport map estimated from samples.

    Parameters
    ----------
    source : sampleable source distribution; default uniform on the unit
        box of the target's dimension.
    method : 'drag' (annealed, averaged), 'sgd', or 'asgd'. The fixed-eps
        baselines require ``eps``.
    t_max : gradient steps.
    eps : regularization for 'sgd'/'asgd'; unused by 'drag'.
    gamma1, a, b, projection, anchor, batch_size, omega,
    scale_gamma_with_batch, seed : solver knobs, stored verbatim and
        resolved against the problem at fit time.
    map_eps : if > 0, ``transform`` returns barycentric (entropic) map
        points instead of hard assignments.

    Attributes
    ----------
    target_, source_ : the fitted problem.
    config_ : resolved solver configuration.
    potential_, potential_avg_, potential_wavg_ : final iterate, running
        mean, and log-power weighted mean (None when not tracked).
    n_iter_ : steps performed.
    """

    def __init__(
        self,
        source: SourceSpec | None = None,
        method: str = "drag",
        t_max: int = 10_000,
        eps: float | None = None,
        gamma1: float | None = None,
        a: float = 0.75,
        b: float = 0.75,
        projection: str = "anchored",
        anchor: int = 0,
        batch_size: int = 1,
        omega: float | None = None,
        scale_gamma_with_batch: bool = True,
        seed: int = 0,
        map_eps: float = 0.0,
    ):
        self.source = source
        self.method = method
        self.t_max = t_max
        self.eps = eps
        self.gamma1 = gamma1
        self.a = a
        self.b = b
        self.projection = projection
        self.anchor = anchor
        self.batch_size = batch_size
        self.omega = omega
        self.scale_gamma_with_batch = scale_gamma_with_batch
        self.seed = seed
        self.map_eps = map_eps

    def fit(self, X, y=None, sample_weight=None):
        """Learn the dual potential for target atoms ``X``.

        ``sample_weight`` gives the target masses (normalized to sum 1);
        default uniform.
        """
        X = check_array(X, dtype=np.float64, ensure_min_samples=1)
        n, d = X.shape
        if sample_weight is None:
            weights = np.full(n, 1.0 / n)
        else:
            weights = check_array(
                sample_weight, ensure_2d=False, dtype=np.float64
            ).ravel()
            if weights.size != n:
                raise ValueError("sample_weight length must match n_samples")
            total = weights.sum()
            if not total > 0:
                raise ValueError("sample_weight must have positive sum")
            weights = weights / total
        target = DiscreteMeasure(points=X, weights=weights)
        source = self.source
        if source is None:
            source = UniformBox(np.zeros(d), np.ones(d))
        if source.dim != d:
            raise ValueError(
                f"source dimension {source.dim} != target dimension {d}"
            )
        if self.method not in ("drag", "sgd", "asgd"):
            raise ValueError("method must be 'drag', 'sgd', or 'asgd'")
        config = DragConfig(
            t_max=self.t_max,
            gamma1=self.gamma1,
            a=self.a,
            b=self.b,
            projection=self.projection,
            anchor=self.anchor,
            batch_size=self.batch_size,
            scale_gamma_with_batch=self.scale_gamma_with_batch,
            omega=self.omega if self.method == "drag" else None,
            seed=self.seed,
        ).resolve(source, target)
        if self.method == "drag":
            state = run_drag(config, source, target)
        else:
            if self.eps is None:
                raise ValueError(f"method {self.method!r} requires eps")
            averaging = "none" if self.method == "sgd" else "plain"
            state = run_fixed_eps(config, self.eps, averaging, source, target)
        self.target_ = target
        self.source_ = source
        self.config_ = config
        self.potential_ = state.g
        self.potential_avg_ = state.g_bar
        self.potential_wavg_ = state.g_bar_w
        self.n_iter_ = state.k
        self.n_features_in_ = d
        return self

    def _active_potential(self) -> np.ndarray:
        """Potential used by transform/predict: weighted mean if tracked,
        else running mean, else the last iterate."""
        if self.potential_wavg_ is not None:
            return self.potential_wavg_
        if self.potential_avg_ is not None:
            return self.potential_avg_
        return self.potential_

    def predict(self, X) -> np.ndarray:
        """0-based index of the target atom assigned to each row of X."""
        check_is_fitted(self, "potential_")
        X = check_array(X, dtype=np.float64)
        return map_indices(self._active_potential(), self.target_, X)

    def transform(self, X) -> np.ndarray:
        """Image of X under the estimated map.

        Hard assignment to target atoms, or the soft-assignment average
        of atoms when ``map_eps`` > 0.
        """
        check_is_fitted(self, "potential_")
        X = check_array(X, dtype=np.float64)
        g = self._active_potential()
        if self.map_eps > 0:
            return entropic_map_points(g, self.target_, X, self.map_eps)
        return map_points(g, self.target_, X)

    def estimate_cost(self, n_mc: int = 100_000, seed: int | None = None) -> tuple[float, float]:
        """Monte Carlo transport-cost estimate ``(value, std_error)``."""
        check_is_fitted(self, "potential_")
        base = self.seed if seed is None else seed
        gen = RngStream(base, COST_STREAM).generator()
        return ot_cost_estimate(
            self._active_potential(), self.source_, self.target_, n_mc, gen
        )
