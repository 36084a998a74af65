"""Two-dimensional minimal-resistance bodies.

Closed-form solution families for the planar drag-minimization problem
(restricted and unrestricted slope variants), with three independent
numerical oracles: grid dynamic programming, second-variation
perturbation, and Monte Carlo particle collisions.
"""

from .extremal import (
    LAMBDA_MAX,
    SLOPE_THRESHOLD,
    Classification,
    ExtremalCertificate,
    SolutionReport,
    SolutionStatus,
    check_certificate,
    classify_stationary,
    enumerate_minimizers,
    hamiltonian,
    hamiltonian_derivatives,
    lambda_for_slope,
    make_certificate,
    solve,
    staircase_gradient_check,
    stationary_slopes,
)
from .functional import (
    branch_resistance_final_flat,
    branch_resistance_initial_flat,
    resistance_2d,
    resistance_3d,
    resistance_difference,
    resistance_difference_closed_form,
    staircase_resistance,
    triangle_resistance,
)
from .geometry import (
    CounterexampleParams,
    ProblemSpec,
    Profile,
    StaircaseParams,
    ValidationResult,
    Variant,
    make_counterexample,
    make_staircase,
    make_triangle,
    profile_from_dict,
    profile_to_dict,
    validate,
)
from .montecarlo import (
    CollisionReport,
    ImpactRecord,
    McEstimate,
    estimate_resistance,
    impact_at,
    reflect,
    single_collision_check,
)
from .oracle import (
    DpConfig,
    PerturbationConfig,
    PerturbationReport,
    dp_min_resistance,
    finite_difference_gradient,
    second_variation_test,
)

__all__ = [
    "LAMBDA_MAX",
    "SLOPE_THRESHOLD",
    "Classification",
    "CollisionReport",
    "CounterexampleParams",
    "DpConfig",
    "ExtremalCertificate",
    "ImpactRecord",
    "McEstimate",
    "PerturbationConfig",
    "PerturbationReport",
    "ProblemSpec",
    "Profile",
    "SolutionReport",
    "SolutionStatus",
    "StaircaseParams",
    "ValidationResult",
    "Variant",
    "branch_resistance_final_flat",
    "branch_resistance_initial_flat",
    "check_certificate",
    "classify_stationary",
    "dp_min_resistance",
    "enumerate_minimizers",
    "estimate_resistance",
    "finite_difference_gradient",
    "hamiltonian",
    "hamiltonian_derivatives",
    "impact_at",
    "lambda_for_slope",
    "make_certificate",
    "make_counterexample",
    "make_staircase",
    "make_triangle",
    "profile_from_dict",
    "profile_to_dict",
    "reflect",
    "resistance_2d",
    "resistance_3d",
    "resistance_difference",
    "resistance_difference_closed_form",
    "second_variation_test",
    "single_collision_check",
    "solve",
    "staircase_gradient_check",
    "staircase_resistance",
    "stationary_slopes",
    "triangle_resistance",
    "validate",
]
