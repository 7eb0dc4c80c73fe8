"""Exceptions for the ntwfsm package."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .machine import Violation


class NtwfsmError(Exception):
    """Base class for all errors raised by ntwfsm."""


class UnknownSemiringError(NtwfsmError):
    """Exception raised for a semiring name that is not registered."""


class SemiringMismatchError(NtwfsmError):
    """Exception raised when operands use different semirings."""


class ArityMismatchError(NtwfsmError):
    """Exception raised when tape counts do not agree."""


class TapeIndexError(NtwfsmError):
    """Exception raised for a tape index outside the machine's arity."""


class PathBudgetExceededError(NtwfsmError):
    """Exception raised when enumeration would exceed its path budget."""


class DivergentEpsilonError(NtwfsmError):
    """Exception raised when an epsilon-tuple sum would not converge."""


class JoinGuardError(NtwfsmError):
    """Exception raised when the direct join cannot handle its inputs."""


class UnsupportedSemiringError(NtwfsmError):
    """Exception raised when an algorithm needs a different semiring."""


class NegativeWeightError(NtwfsmError):
    """Exception raised for negative tropical weights in shortest-path search."""


class InvalidConfigError(NtwfsmError):
    """Exception raised for invalid option values."""


class ParseError(NtwfsmError):
    """Exception raised for syntax errors in the text format."""

    def __init__(self, line: int, message: str) -> None:
        """Initialize the error with the offending 1-based line number."""
        super().__init__(f"line {line}: {message}")
        self.line = line


class MachineValidationError(NtwfsmError):
    """Exception raised when a machine breaks its structural invariants."""

    def __init__(self, violations: Sequence[Violation]) -> None:
        """Initialize the error from a list of violations."""
        super().__init__("; ".join(str(violation) for violation in violations))
        self.violations = list(violations)
