"""Exception hierarchy for rigidcol.

Every error carries the process exit status the command-line front end
returns for it.
"""

from __future__ import annotations

from typing import Any, Optional


class RigidColError(Exception):
    """Base class of every error raised by rigidcol."""

    exit_code = 1


class ParameterError(RigidColError, ValueError):
    """An argument is outside the range an operation accepts."""

    exit_code = 2


class BracketError(RigidColError):
    """A bisection interval does not enclose a sign change."""

    exit_code = 3


class MonotonicityError(RigidColError):
    """The derivative sign pattern the solver relies on does not hold."""

    exit_code = 4

    def __init__(
        self,
        message: str,
        point: Optional[tuple[float, float]] = None,
        partials: Optional[tuple[float, float, float, float]] = None,
    ) -> None:
        super().__init__(message)
        self.point = point
        self.partials = partials


class ConvergenceError(RigidColError):
    """An iteration cap was hit or two independent runs disagree."""

    exit_code = 5

    def __init__(
        self,
        message: str,
        best: Optional[Any] = None,
        residual_norm: Optional[float] = None,
    ) -> None:
        super().__init__(message)
        self.best = best
        self.residual_norm = residual_norm


class ParseError(RigidColError):
    """A graph file is malformed."""

    exit_code = 6

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class CapacityError(RigidColError):
    """An exhaustive enumeration was requested beyond its size guard."""

    exit_code = 7


class DomainError(RigidColError, ValueError):
    """A spread vector lies outside the domain of the formulas."""

    exit_code = 8
