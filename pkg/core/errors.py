# core/errors.py
"""
Exception hierarchy for the Berezin toolkit.

Input-shape problems also derive from ValueError so callers that only know the
standard library can still catch them.
"""
from typing import Optional


class BerezinError(Exception):
    """Base class for all library errors."""


class InvalidDimensionError(BerezinError, ValueError):
    pass


class InvalidPointError(BerezinError, ValueError):
    pass


class ZeroKernelError(BerezinError, ValueError):
    pass


class IndexOutOfRangeError(BerezinError, IndexError):
    pass


class ShapeMismatchError(BerezinError, ValueError):
    pass


class NotPSDError(BerezinError, ValueError):
    def __init__(self, min_eigenvalue: float, threshold: float):
        self.min_eigenvalue = min_eigenvalue
        self.threshold = threshold
        super().__init__(
            f"matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < {threshold:.3e}"
        )


class NumericError(BerezinError, ArithmeticError):
    pass


class NotInvertibleError(BerezinError, ValueError):
    pass


class NotConvexOrliczError(BerezinError, ValueError):
    pass


class PreconditionViolatedError(BerezinError):
    def __init__(self, message: str, residual: Optional[float] = None, threshold: Optional[float] = None):
        self.residual = residual
        self.threshold = threshold
        super().__init__(message)


class ConfigurationError(BerezinError, ValueError):
    def __init__(self, message: str, computed_size: Optional[int] = None):
        self.computed_size = computed_size
        super().__init__(message)


class InputError(BerezinError, ValueError):
    """Malformed or inconsistent input documents (CLI exit code 2)."""


class InvalidParameterError(BerezinError, ValueError):
    """A scalar parameter (t, r, s, alpha, lambda, tolerance) is outside its admissible range."""
