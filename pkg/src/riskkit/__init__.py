"""Collective-risk modelling toolkit.

Aggregate loss distributions of frequency-severity models (FFT, pmf
recursion, Monte Carlo), reinsurance costing with individual and aggregate
coverage modifiers and reinstatements, the cdf of sums of dependent risks
via a geometric simplex iteration or simulation, and stochastic claims
reserving on run-off triangles.
"""

from . import copulas, distributions
from .aggregate import AggregateDistribution, compute_fft, compute_mc, compute_recursive
from .discretize import ArithmeticSeverity, cdf_bounds_report, discretize, step_convergence
from .errors import (
    ConfigError,
    DataError,
    MomentError,
    NotComputedError,
    ParameterError,
    RiskKitError,
    StructureError,
    UnsupportedFamilyError,
)
from .lossaggregation import DependentSum, MarginList
from .lossmodel import (
    CompoundMoments,
    EngineConfig,
    FrequencyModel,
    Layer,
    LayerCosting,
    PolicyStructure,
    WarningRecord,
    build_aggregate,
    cost_layer,
    cost_policy,
    costing_summary,
    layer_summary,
    moments,
)
from .lossreserve import (
    CrmResult,
    FisherLangeResult,
    ReservingSpec,
    TriangleSet,
    crm_reserve,
    fisher_lange,
    load_bundled_triangles,
    read_triangle_csv,
    reserve_report,
    write_triangle_csv,
)

__version__ = "0.1.0"

__all__ = [
    "copulas",
    "distributions",
    "AggregateDistribution",
    "compute_fft",
    "compute_mc",
    "compute_recursive",
    "ArithmeticSeverity",
    "discretize",
    "cdf_bounds_report",
    "step_convergence",
    "DependentSum",
    "MarginList",
    "CompoundMoments",
    "EngineConfig",
    "FrequencyModel",
    "Layer",
    "LayerCosting",
    "PolicyStructure",
    "WarningRecord",
    "build_aggregate",
    "cost_layer",
    "cost_policy",
    "costing_summary",
    "layer_summary",
    "moments",
    "CrmResult",
    "FisherLangeResult",
    "ReservingSpec",
    "TriangleSet",
    "crm_reserve",
    "fisher_lange",
    "load_bundled_triangles",
    "read_triangle_csv",
    "reserve_report",
    "write_triangle_csv",
    "RiskKitError",
    "ParameterError",
    "MomentError",
    "UnsupportedFamilyError",
    "StructureError",
    "DataError",
    "NotComputedError",
    "ConfigError",
]
