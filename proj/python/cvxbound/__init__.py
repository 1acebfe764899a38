"""Tight bounds on density functionals over psi-concave densities."""

from ._core import (
    BoundResult,
    CommonInfoBracket,
    ConditionFailed,
    ConvexityFamily,
    DensitySpec,
    Error,
    Evidence,
    Functional,
    InvalidArgument,
    NoClosedForm,
    NonConvergence,
    NonIntegrable,
    OracleEstimate,
    Unsupported,
    binomial_variational,
    closed_form_bounds,
    common_info_bracket,
    common_info_gap,
    counterexample_density,
    differential_entropy,
    dist,
    extremal_linear,
    gaussian,
    integrate_functional,
    multivariate_t,
    quadratic_density,
    renyi_entropy_bracket,
    run_cli,
    tight_bounds,
    uniform_box,
)

__version__ = "0.3.0"
