"""Heat and Poisson flows on the torus via Jacobi theta kernels."""

from .fourier import (
    CoefficientSequence,
    PeriodicGrid,
    SampledFunction,
    analyze,
    analyze_direct,
    circular_convolve,
    convolve_direct,
    inner,
    synthesize,
)
from .theta import (
    MIN_KERNEL_TIME,
    ThetaParams,
    kernel,
    theta3_bound,
    theta3_product,
    theta3_series,
)
from .semigroups import (
    MultiplierSpec,
    SubordinationError,
    SubordinationQuadrature,
    bochner_scalar,
    generator_apply,
    heat_residual,
    maximal_function,
    poisson_evolve_d,
    poisson_evolve_kernel,
    poisson_evolve_multiplier,
    poisson_kernel,
    subordinate,
    theta_evolve,
    theta_evolve_d,
)
from .ultradist import (
    DerivativeBound,
    GrowthClass,
    PowerRule,
    UltraDistribution,
    check_membership,
    derivative_bound_constants,
    derivative_sequence,
    derivative_ultra,
    evolve_ultra,
    fit_growth,
    pair,
    positivity_check,
    smoothing_threshold,
    weak_limit_check,
)
from .checks import CheckReport, PropertyRecord, run_suite

__version__ = "0.1.0"

__all__ = [
    "CoefficientSequence",
    "PeriodicGrid",
    "SampledFunction",
    "analyze",
    "analyze_direct",
    "circular_convolve",
    "convolve_direct",
    "inner",
    "synthesize",
    "MIN_KERNEL_TIME",
    "ThetaParams",
    "kernel",
    "theta3_bound",
    "theta3_product",
    "theta3_series",
    "MultiplierSpec",
    "SubordinationError",
    "SubordinationQuadrature",
    "bochner_scalar",
    "generator_apply",
    "heat_residual",
    "maximal_function",
    "poisson_evolve_d",
    "poisson_evolve_kernel",
    "poisson_evolve_multiplier",
    "poisson_kernel",
    "subordinate",
    "theta_evolve",
    "theta_evolve_d",
    "DerivativeBound",
    "GrowthClass",
    "PowerRule",
    "UltraDistribution",
    "check_membership",
    "derivative_bound_constants",
    "derivative_sequence",
    "derivative_ultra",
    "evolve_ultra",
    "fit_growth",
    "pair",
    "positivity_check",
    "smoothing_threshold",
    "weak_limit_check",
    "CheckReport",
    "PropertyRecord",
    "run_suite",
]
