"""Exceptions and warnings raised across the package."""

from __future__ import annotations


class ScalarOptError(Exception):
    """Base class for every error raised by scalaropt."""


# ------------------------------------------------------------------
# Input errors
# ------------------------------------------------------------------


class ParseError(ScalarOptError):
    """Expression text could not be parsed.

    ``offset`` is the UTF-8 byte offset of the offending token.
    """

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class ExprSyntaxError(ParseError):
    """Malformed expression (unexpected or missing token)."""


class UnknownIdentifierError(ParseError):
    """Identifier that is neither the variable, a constant nor a function."""

    def __init__(self, name: str, offset: int) -> None:
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class InvalidInput(ScalarOptError, ValueError):
    """Bad interval, options, model parameters or settings value."""


class DomainFault(ScalarOptError):
    """A function was evaluated outside its domain (pole, invalid argument, overflow)."""


# ------------------------------------------------------------------
# Solver failures
# ------------------------------------------------------------------


class SolverError(ScalarOptError):
    """A solve could not produce a result."""


class NoEvaluablePoint(SolverError):
    """Every probe of the objective faulted."""


class BracketFailure(SolverError):
    """Downhill expansion never found a bracketing triple."""


class PreconditionViolation(SolverError):
    """An operation was called with inputs breaking its precondition."""


class AllPointsFault(SolverError):
    """Every plot sample faulted."""


# ------------------------------------------------------------------
# Warnings
# ------------------------------------------------------------------


class ScalarOptWarning(UserWarning):
    """Base class for non-fatal conditions reported to the caller."""


class MaxIterationsWarning(ScalarOptWarning):
    """A solver stopped at max_iterations before meeting its tolerance."""


class UnlabeledSegmentWarning(ScalarOptWarning):
    """A monotonic segment's midpoint derivative was zero or faulted."""


class BoundaryOptimumWarning(ScalarOptWarning):
    """The optimum lies on the search boundary, not in the interior."""


class DroppedPointWarning(ScalarOptWarning):
    """A candidate critical point was discarded."""
