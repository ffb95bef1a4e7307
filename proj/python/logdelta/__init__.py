"""Logarithmic Schroedinger equation with a delta-prime interaction at x = 0."""

from ._core import (
    BifurcationPoint,
    ConvergenceError,
    GroundState,
    bifurcation_sweep,
    d_free,
    d_gamma,
    d_zero,
    dgamma_lower_bound,
    evolve,
    grid_coordinates,
    minimize,
    n_gamma,
    report,
    sample_profile,
    sigma_map,
    solve_3s,
    stability,
    stationary_residual,
    stationary_states,
)

__all__ = [
    "BifurcationPoint",
    "ConvergenceError",
    "GroundState",
    "bifurcation_sweep",
    "d_free",
    "d_gamma",
    "d_zero",
    "dgamma_lower_bound",
    "evolve",
    "grid_coordinates",
    "minimize",
    "n_gamma",
    "report",
    "sample_profile",
    "sigma_map",
    "solve_3s",
    "stability",
    "stationary_residual",
    "stationary_states",
]
