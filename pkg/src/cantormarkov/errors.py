"""Exception types shared across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """Input lies outside the domain of an operation."""


class ArgumentError(ValueError):
    """Arguments violate an operation's preconditions."""


class NumericError(ArithmeticError):
    """A floating-point evaluation produced NaN or left the domain.

    Parameters
    ----------
    message : str
        Human readable description.
    step : int, optional
        Iteration index at which the failure happened, when relevant.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


class ConvergenceError(ArithmeticError):
    """An iterative procedure did not converge; ``diagnostics`` holds details."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DivergenceError(ArithmeticError):
    """An infinite sum has a divergent tail under the requested parameters."""

    def __init__(self, message: str, threshold: float | None = None):
        super().__init__(message)
        self.threshold = threshold


class InsufficientDataError(ValueError):
    """Finite data does not determine the requested quantity."""


class NoFitError(ValueError):
    """No lag carries signal above the noise floor; ``curve`` is still attached."""

    def __init__(self, message: str, curve=None):
        super().__init__(message)
        self.curve = curve


class ConfigError(ValueError):
    """Configuration file is missing, unreadable or malformed."""
