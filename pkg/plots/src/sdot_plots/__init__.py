"""Figure rendering for sdot benchmark outputs.

A read-only consumer of the solver's file contracts (trace CSVs with
their ``.meta.json``/``.slopes.json`` sidecars, and the quantiles-demo
CSV). Nothing here imports or recomputes solver quantities — fitted
slopes shown on figures are copied verbatim from the sidecars the
benchmark harness wrote.
"""

from .convergence import (
    ANNOTATIONS_SCHEMA,
    ConvergenceSpec,
    annotations_path,
    render_convergence,
)
from .quantiles import render_quantiles
from .traces import TraceData, load_quantiles_csv, load_trace

__version__ = "0.1.0"

__all__ = [
    "ANNOTATIONS_SCHEMA",
    "ConvergenceSpec",
    "TraceData",
    "annotations_path",
    "load_quantiles_csv",
    "load_trace",
    "render_convergence",
    "render_quantiles",
    "__version__",
]
