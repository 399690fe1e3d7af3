"""Exception types shared across the package."""

from __future__ import annotations


class ParameterError(ValueError):
    """An input lies outside the physical or mathematical domain."""


class ConfigError(ValueError):
    """A configuration document or sweep specification is malformed."""


class NumericalError(ArithmeticError):
    """A numerical procedure failed (non-convergence, unphysical matrix).

    ``last_value`` carries the last iterate or offending quantity when one
    exists.
    """

    def __init__(self, message: str, last_value: float | None = None):
        super().__init__(message)
        self.last_value = last_value


class EstimationError(ValueError):
    """Channel parameters cannot be estimated from the supplied data."""
