"""Exception hierarchy shared by the library and the command-line front end."""

from __future__ import annotations


class LaneEmdenError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DomainError(LaneEmdenError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 2


class ConvergenceError(LaneEmdenError, RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``estimate`` carries the achieved error estimate (or the last reached
    abscissa for integrators) when one is available.
    """

    exit_code = 4

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class MethodDisagreement(ConvergenceError):
    """Two independent methods returned values further apart than allowed."""


class InternalConsistencyError(ConvergenceError):
    """A result contradicts a property that holds under the checked preconditions."""


class CriterionInapplicable(LaneEmdenError):
    """The stability criterion does not apply because ``lambda + alpha_1 <= 0``."""

    exit_code = 3

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin
