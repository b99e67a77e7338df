"""Correct-decoding exponents of discrete memoryless channels.

The exponent at rates above capacity is computed by iterated exact
minimizations with provable per-iteration descent, cross-checked by
independent brute-force and certified-descent oracles.
"""

from .core import (
    CapBindingError,
    Channel,
    DegenerateReferenceError,
    DivergenceWeights,
    ExponentError,
    GridTooLargeError,
    InfeasibleError,
    InvalidInputError,
    InvalidParameterError,
    JointDistribution,
    NotConvergedWarning,
    NumericalFailureError,
    conditional_kl,
    divergence_combination,
    kl,
    mutual_information,
)
from .objectives import (
    GradientPoint,
    RateConstraintPoint,
    channel_divergence,
    divergence_objective,
    exponent_objective,
    gallager_e0_neg,
    min_exponent_objective,
    rate_objective,
    slope_objective,
)
from .oracle import (
    GridSpec,
    OracleResult,
    descent_min_slope,
    grid_min_exponent,
    grid_min_exponent_self,
    grid_min_slope_self,
)
from .solvers import (
    CurvePoint,
    InnerStep,
    RunReport,
    SolverConfig,
    dual_value,
    golden_section_max,
    inner_step_fixed_rate,
    solve_fixed_alpha_rho,
    solve_fixed_gradient,
    solve_fixed_rate,
    solve_fixed_rate_eta,
    sweep_curve,
)
from .updates import (
    FamilyAParams,
    FamilyBParams,
    TiltedChannel,
    UpdateResult,
    e0_family_a,
    e0_family_b,
    family_a_slots,
    family_b_slots,
    update_family_a,
    update_family_b,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "Channel",
    "JointDistribution",
    "DivergenceWeights",
    "kl",
    "conditional_kl",
    "mutual_information",
    "divergence_combination",
    "ExponentError",
    "InvalidInputError",
    "InvalidParameterError",
    "InfeasibleError",
    "DegenerateReferenceError",
    "GridTooLargeError",
    "NumericalFailureError",
    "CapBindingError",
    "NotConvergedWarning",
    # objectives
    "RateConstraintPoint",
    "GradientPoint",
    "channel_divergence",
    "divergence_objective",
    "rate_objective",
    "exponent_objective",
    "slope_objective",
    "gallager_e0_neg",
    "min_exponent_objective",
    # updates
    "TiltedChannel",
    "FamilyAParams",
    "FamilyBParams",
    "UpdateResult",
    "family_a_slots",
    "family_b_slots",
    "update_family_a",
    "update_family_b",
    "e0_family_a",
    "e0_family_b",
    # solvers
    "SolverConfig",
    "RunReport",
    "InnerStep",
    "CurvePoint",
    "golden_section_max",
    "dual_value",
    "inner_step_fixed_rate",
    "solve_fixed_rate",
    "solve_fixed_gradient",
    "solve_fixed_alpha_rho",
    "solve_fixed_rate_eta",
    "sweep_curve",
    # oracle
    "GridSpec",
    "OracleResult",
    "grid_min_exponent",
    "grid_min_exponent_self",
    "grid_min_slope_self",
    "descent_min_slope",
]
