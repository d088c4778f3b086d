"""Exception types shared across the package."""


class CogmacError(Exception):
    """Base class for all package errors."""


class ConfigError(CogmacError):
    """Malformed or inconsistent configuration."""


class InfeasibleError(CogmacError):
    """Parameters outside the feasible region (e.g. tau >= cycle length)."""


class SolverError(CogmacError):
    """Numerical solver failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class HeterogeneousModelError(CogmacError):
    """Analytical operation requested on a heterogeneous configuration.

    The closed-form multi-channel model and the stationary-point diagnostics
    only cover homogeneous networks; use the Monte Carlo simulator instead.
    """
