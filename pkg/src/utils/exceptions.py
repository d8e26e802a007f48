"""
Domain errors for the THz hybrid beamforming toolkit.

All errors subclass a builtin so callers catching ValueError or
RuntimeError keep working.
"""
from typing import Optional


class InvalidArgumentError(ValueError):
    """Raised when an operation receives an argument outside its domain."""


class ConfigValidationError(ValueError):
    """
    Raised when a scenario configuration fails to parse or validate.

    Attributes:
        key: Dotted path of the offending configuration key, if known
    """

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class SolverError(RuntimeError):
    """Raised when a beamforming solver breaks one of its own invariants."""
