"""Adjusted empirical likelihood inference for ARMA models in the frequency domain."""

from ._aelts import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InputError,
    NoSolutionError,
    Periodogram,
    SingularMatrixError,
    UsageError,
    __version__,
    bartlett_factor,
    chi_square_quantile,
    el_stat,
    interval,
    periodogram,
    run_coverage,
    sandwich,
    scan_region,
    simulate,
    solve_dual,
    spectral_density,
    whittle_fit,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "InputError",
    "NoSolutionError",
    "Periodogram",
    "SingularMatrixError",
    "UsageError",
    "__version__",
    "bartlett_factor",
    "chi_square_quantile",
    "el_stat",
    "interval",
    "periodogram",
    "run_coverage",
    "sandwich",
    "scan_region",
    "simulate",
    "solve_dual",
    "spectral_density",
    "whittle_fit",
]
