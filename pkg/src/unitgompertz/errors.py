"""Exception hierarchy shared by every module and mapped to CLI exit codes."""

from __future__ import annotations

from typing import Any


class UnitGompertzError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(UnitGompertzError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ArgumentError(UnitGompertzError, ValueError):
    """An argument violates a contract (sizes, counts, excluded values)."""


class ConvergenceError(UnitGompertzError, ArithmeticError):
    """An iterative procedure exhausted its budget.

    ``partial`` carries whatever state was reached (partial sums, best value,
    error estimate) so that callers can inspect it.
    """

    exit_code = 2

    def __init__(self, message: str, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


class PrecisionError(UnitGompertzError, ArithmeticError):
    """The result would be dominated by cancellation noise."""

    exit_code = 2


class NumericalOverflowError(UnitGompertzError, OverflowError):
    """The result is not representable as a finite double."""

    exit_code = 2


class EstimationError(UnitGompertzError):
    """Parameter estimation failed; the best parameters found are attached."""

    exit_code = 2

    def __init__(self, message: str, best: Any = None, diagnostics: Any = None) -> None:
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics
