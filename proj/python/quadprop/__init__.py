"""Exact Gaussian propagators for time-dependent quadratic Hamiltonians."""

from ._quadprop import (  # noqa: F401
    CoefficientFn,
    Grid,
    GridAxis,
    GridState,
    HamiltonianSpec,
    MehlerPhase,
    Method,
    Nonlinearity,
    NumericError,
    Propagator,
    SpecError,
    Trajectory,
    closed_form_mu,
    decay_weight,
    endpoint,
    eval_kernel,
    gaussian_state,
    hermite_state,
    is_admissible,
    mixed_norm,
    phase_coefficients,
    preset,
    propagate,
    resample,
    riccati_oracle,
    sigma_of_t,
    solve_characteristic,
    solve_nls,
    soliton_state,
    subcritical_check,
    table1_kernel,
    validate,
    verify,
)

__version__ = "1.0.0"
