from __future__ import annotations


class NearFarError(Exception):
    """Base class for every error raised by nearfar_cdma."""


class DomainError(NearFarError, ValueError):
    """An argument lies outside the domain of the operation."""


class SizeError(DomainError):
    """Problem too large for exact enumeration."""


class NumericError(NearFarError, ArithmeticError):
    """A numerical routine produced a non-finite value or failed to converge."""


class OptimizerBudgetError(NumericError):
    """Tolerance not reached within the iteration cap."""


class BracketFailureError(NumericError):
    """The fixed-point grid found no sign change of psi(m) = map(m) - m."""

    def __init__(self, message: str, *, suggested_grid: int):
        super().__init__(message)
        self.suggested_grid = suggested_grid
