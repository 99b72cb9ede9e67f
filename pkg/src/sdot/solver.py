"""Projected averaged stochastic gradient solvers for the semi-dual.

The annealed solver (:func:`run_drag`) follows, per iteration k = 1..t:

    gamma_k = gamma1 * k^(-b)
    g_k     = Proj_C( g_{k-1} - gamma_k * grad h_{eps_{k-1}}(X_k, g_{k-1}) )
    gbar_k  = gbar_{k-1} + (g_k - gbar_{k-1}) / (k + 1)
    eps_k   = k^(-a)

Note the gradient at step k uses eps_{k-1} (eps_0 = 1); the regularization
is updated at the end of the loop body. Faithfulness over tidiness.

Fixed-regularization baselines (:func:`run_fixed_eps`) run the same loop
with constant eps; ``averaging="plain"`` maintains the running mean
(ASGD), ``averaging="none"`` does not (SGD, estimator is the last
iterate).

Sampling draws from a Philox stream in fixed blocks of
``SAMPLE_BLOCK`` steps, so runs are bit-reproducible per
``(config, seed)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .measures import DiscreteMeasure, RngStream, SourceSpec
from .projection import ProjectionSet, make_projection
from .semidual import minibatch_grad

# Stream ids, one per consumer kind (see measures.RngStream).
SOLVER_STREAM = 0

# Steps' worth of samples drawn per block in the solver loop.
SAMPLE_BLOCK = 4096


def decay(k: int, exponent: float) -> float:
    """Shared power schedule k^(-exponent); k = 0 maps to 1 by convention."""
    if k == 0:
        return 1.0
    return float(k) ** -exponent


def step_size(gamma1: float, b: float, k: int) -> float:
    """gamma_k = gamma1 * k^(-b)."""
    return gamma1 * decay(k, b)


def regularization_eps(a: float, k: int) -> float:
    """eps_k = k^(-a) for k >= 1, eps_0 = 1."""
    return decay(k, a)


@dataclass(frozen=True)
class DragConfig:
    """Solver configuration; ``None`` fields are filled by :meth:`resolve`.

    Fields
    ------
    t_max : iterations to run.
    gamma1 : base step size; defaults to 1/sqrt(w_min) of the target
        (the inverse root compensates for the w_min-scaled curvature of
        the semidual; with uniform weights it equals sqrt(M)).
    a, b : regularization and step-size exponents (defaults 0.75).
    projection : 'anchored' (default), 'box', or 'none'.
    anchor : pinned coordinate of the anchored set (0-based).
    radius_bound : R for the projection set; defaults to
        max(source.radius_bound, target.radius_hint).
    batch_size : samples per step; when > 1 and
        ``scale_gamma_with_batch``, gamma1 is multiplied by
        sqrt(batch_size) at resolve time.
    omega : optional log-power weighted-averaging exponent (> 0).
    seed : base seed of the run's sample stream.
    eval_schedule : iteration indices at which the observer fires.
    """

    t_max: int
    gamma1: float | None = None
    a: float = 0.75
    b: float = 0.75
    projection: str = "anchored"
    anchor: int = 0
    radius_bound: float | None = None
    batch_size: int = 1
    scale_gamma_with_batch: bool = True
    omega: float | None = None
    seed: int = 0
    eval_schedule: tuple[int, ...] | None = None
    resolved: bool = False

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.gamma1 is not None and not self.gamma1 > 0:
            raise ValueError("gamma1 must be > 0")
        if self.a < 0 or self.b < 0:
            raise ValueError("exponents a and b must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.omega is not None and not self.omega > 0:
            raise ValueError("omega must be > 0 when set")
        if self.a < self.b:
            warnings.warn(
                f"a={self.a} < b={self.b}: averaged-iterate rate guarantees "
                "assume a >= b",
                RuntimeWarning,
                stacklevel=2,
            )

    def resolve(self, source: SourceSpec, target: DiscreteMeasure) -> "DragConfig":
        """Fill defaults from the problem; idempotent."""
        if self.resolved:
            return self
        gamma1 = self.gamma1 if self.gamma1 is not None else 1.0 / math.sqrt(target.w_min)
        if self.batch_size > 1 and self.scale_gamma_with_batch:
            gamma1 *= math.sqrt(self.batch_size)
        radius = self.radius_bound
        if radius is None:
            radius = max(source.radius_bound, target.radius_hint)
        return replace(self, gamma1=gamma1, radius_bound=radius, resolved=True)


@dataclass
class SolverState:
    """Iterate bundle after step k.

    ``eps`` is eps_k (the value the *next* gradient will use), ``gamma``
    the step size applied at step k. ``g_bar`` is the running mean of
    g_0..g_k when averaging is on, else ``None``. ``g_bar_w`` carries the
    log-power weighted average with its weight accumulator ``w_accum``.
    """

    k: int
    g: np.ndarray
    g_bar: np.ndarray | None
    eps: float
    gamma: float
    g_bar_w: np.ndarray | None = None
    w_accum: float = 0.0

    def snapshot(self) -> "SolverState":
        return SolverState(
            k=self.k,
            g=self.g.copy(),
            g_bar=None if self.g_bar is None else self.g_bar.copy(),
            eps=self.eps,
            gamma=self.gamma,
            g_bar_w=None if self.g_bar_w is None else self.g_bar_w.copy(),
            w_accum=self.w_accum,
        )


def initial_state(config: DragConfig, target: DiscreteMeasure, projection: ProjectionSet | None = None, averaging: str = "plain") -> SolverState:
    """g_0 = projection of the zero vector; gbar_0 = g_0; eps_0 = 1."""
    _require_resolved(config)
    proj = projection if projection is not None else _projection_for(config, target)
    g0 = proj.project(np.zeros(target.n_atoms))
    track_w = config.omega is not None
    return SolverState(
        k=0,
        g=g0,
        g_bar=g0.copy() if averaging == "plain" else None,
        eps=1.0,
        gamma=math.nan,
        g_bar_w=g0.copy() if track_w else None,
        # log(1)^omega = 0: the k=0 term carries no weight in the weighted mean
        w_accum=math.log(1.0) ** config.omega if track_w else 0.0,
    )


def weighted_average_update(state: SolverState, omega: float) -> SolverState:
    """Fold state.g (iterate k) into the log-power weighted average.

    Uses lambda_k = log(k+1)^omega / W_k with W_k the running weight sum
    including step k, which reproduces the direct weighted sum
    sum_k log(k+1)^omega g_k / sum_k log(k+1)^omega exactly.
    """
    if not omega > 0:
        raise ValueError("omega must be > 0")
    if state.g_bar_w is None:
        raise ValueError("state does not track a weighted average")
    w_k = math.log(state.k + 1.0) ** omega
    w_accum = state.w_accum + w_k
    if w_accum == 0.0:
        return state
    g_bar_w = state.g_bar_w + (w_k / w_accum) * (state.g - state.g_bar_w)
    return replace(state, g_bar_w=g_bar_w, w_accum=w_accum)


def _advance(
    state: SolverState,
    batch: np.ndarray,
    config: DragConfig,
    target: DiscreteMeasure,
    projection: ProjectionSet,
    eps_next: float,
    grad_eps: float,
) -> SolverState:
    k = state.k + 1
    gamma = step_size(config.gamma1, config.b, k)
    grad = minibatch_grad(state.g, target, batch, grad_eps)
    g = projection.project(state.g - gamma * grad)
    g_bar = state.g_bar
    if g_bar is not None:
        g_bar = g_bar + (g - g_bar) / (k + 1.0)
    new = SolverState(
        k=k, g=g, g_bar=g_bar, eps=eps_next, gamma=gamma,
        g_bar_w=state.g_bar_w, w_accum=state.w_accum,
    )
    if config.omega is not None and new.g_bar_w is not None:
        new = weighted_average_update(new, config.omega)
    return new


def drag_step(
    state: SolverState,
    batch,
    config: DragConfig,
    target: DiscreteMeasure,
    projection: ProjectionSet | None = None,
) -> SolverState:
    """One annealed step: gradient at state.eps (= eps_{k-1}), then project,
    average, and advance the schedules."""
    _require_resolved(config)
    batch = np.asarray(batch, dtype=float)
    if batch.ndim == 1:
        batch = batch[None, :]
    if batch.shape[0] != config.batch_size:
        raise ValueError(f"batch length {batch.shape[0]} != batch_size {config.batch_size}")
    proj = projection if projection is not None else _projection_for(config, target)
    k = state.k + 1
    return _advance(
        state, batch, config, target, proj,
        eps_next=regularization_eps(config.a, k),
        grad_eps=state.eps,
    )


def run_drag(
    config: DragConfig,
    source: SourceSpec,
    target: DiscreteMeasure,
    observer=None,
) -> SolverState:
    """Run the annealed solver for config.t_max steps; returns the final state.

    The observer, if given, is called with a read-only state snapshot at
    every index in ``config.eval_schedule``.
    """
    config = config.resolve(source, target)
    return _run_loop(config, source, target, observer, fixed_eps=None, averaging="plain")


def run_fixed_eps(
    config: DragConfig,
    eps: float,
    averaging: str,
    source: SourceSpec,
    target: DiscreteMeasure,
    observer=None,
) -> SolverState:
    """Fixed-regularization baseline: SGD (averaging='none') or ASGD ('plain').

    Ignores ``config.a``; the projection set is the configured one
    (pass projection='none' for an unconstrained run).
    """
    if not eps > 0:
        raise ValueError("eps must be > 0")
    if averaging not in ("none", "plain"):
        raise ValueError("averaging must be 'none' or 'plain'")
    config = config.resolve(source, target)
    return _run_loop(config, source, target, observer, fixed_eps=eps, averaging=averaging)


def _run_loop(config, source, target, observer, fixed_eps, averaging):
    proj = _projection_for(config, target)
    schedule = frozenset(config.eval_schedule or ())
    gen = RngStream(config.seed, SOLVER_STREAM).generator()
    state = initial_state(config, target, proj, averaging=averaging)
    if fixed_eps is not None:
        state.eps = fixed_eps
    n_b, d = config.batch_size, target.dim
    k = 0
    while k < config.t_max:
        block = min(SAMPLE_BLOCK, config.t_max - k)
        samples = source.sample(gen, block * n_b).reshape(block, n_b, d)
        for i in range(block):
            k += 1
            if fixed_eps is None:
                eps_next = regularization_eps(config.a, k)
                grad_eps = state.eps
            else:
                eps_next = grad_eps = fixed_eps
            state = _advance(
                state, samples[i], config, target, proj,
                eps_next=eps_next, grad_eps=grad_eps,
            )
            if observer is not None and k in schedule:
                observer(state.snapshot())
    return state


def _projection_for(config: DragConfig, target: DiscreteMeasure) -> ProjectionSet:
    return make_projection(
        config.projection, target, config.radius_bound, anchor=config.anchor
    )


def _require_resolved(config: DragConfig) -> None:
    if not config.resolved or config.gamma1 is None or config.radius_bound is None:
        raise ValueError("config must be resolved against (source, target) first")
