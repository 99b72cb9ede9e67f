"""Semi-discrete optimal transport with stochastic annealed solvers.

Solves min over potentials g of the semi-dual objective for quadratic
cost between a sampleable continuous source and a weighted point cloud,
via projected stochastic gradient steps whose entropic regularization is
annealed toward zero. Ships the solver, exact 1-D oracles for testing,
map/cost estimators, a benchmark harness, and a CLI (``sdot``).
"""

from .measures import (
    DimensionMismatchError,
    DiscreteMeasure,
    MalformedRowError,
    NonpositiveWeightError,
    PointCloudError,
    RngStream,
    SourceSpec,
    UniformBall,
    UniformBox,
    WeightSumError,
    load_discrete_measure,
    make_example,
    save_discrete_measure,
    shifted_interval,
)
from .semidual import (
    c_transform,
    c_transform_batch,
    entropic_c_transform,
    entropic_c_transform_batch,
    grad_quadrature_1d,
    laguerre_masses_1d,
    minibatch_grad,
    semidual_integrand,
    semidual_value_mc,
    soft_assignment,
    soft_assignment_batch,
    stochastic_grad,
)
from .projection import (
    AnchoredProjection,
    BoxProjection,
    NoProjection,
    ProjectionSet,
    make_projection,
)
from .solver import (
    DragConfig,
    SolverState,
    decay,
    drag_step,
    initial_state,
    regularization_eps,
    run_drag,
    run_fixed_eps,
    step_size,
    weighted_average_update,
)
from .estimators import (
    TransportAssignment,
    entropic_map_estimate,
    entropic_map_points,
    map_error_lp,
    map_estimate,
    map_indices,
    map_points,
    ot_cost_estimate,
    potential_error_centered,
    potential_gap_sampled,
)
from .oracles import (
    GroundTruth,
    example1_truth,
    example2_construct,
    example3_truth,
    ground_truth_from_json,
    ground_truth_to_json,
    quantile_oracle_1d,
)
from .transport import SemiDiscreteTransport

__version__ = "0.1.0"

__all__ = [
    "AnchoredProjection",
    "BoxProjection",
    "DimensionMismatchError",
    "DiscreteMeasure",
    "DragConfig",
    "GroundTruth",
    "MalformedRowError",
    "NoProjection",
    "NonpositiveWeightError",
    "PointCloudError",
    "ProjectionSet",
    "RngStream",
    "SemiDiscreteTransport",
    "SolverState",
    "SourceSpec",
    "TransportAssignment",
    "UniformBall",
    "UniformBox",
    "WeightSumError",
    "c_transform",
    "c_transform_batch",
    "decay",
    "drag_step",
    "entropic_c_transform",
    "entropic_c_transform_batch",
    "entropic_map_estimate",
    "entropic_map_points",
    "example1_truth",
    "example2_construct",
    "example3_truth",
    "grad_quadrature_1d",
    "ground_truth_from_json",
    "ground_truth_to_json",
    "initial_state",
    "laguerre_masses_1d",
    "load_discrete_measure",
    "make_example",
    "make_projection",
    "map_error_lp",
    "map_estimate",
    "map_indices",
    "map_points",
    "minibatch_grad",
    "ot_cost_estimate",
    "potential_error_centered",
    "potential_gap_sampled",
    "quantile_oracle_1d",
    "regularization_eps",
    "run_drag",
    "run_fixed_eps",
    "save_discrete_measure",
    "semidual_integrand",
    "semidual_value_mc",
    "shifted_interval",
    "soft_assignment",
    "soft_assignment_batch",
    "step_size",
    "stochastic_grad",
    "weighted_average_update",
    "__version__",
]
