"""Exception hierarchy shared by every analysis module.

Each class carries the CLI exit code it maps to.
"""

from __future__ import annotations


class QstError(Exception):
    exit_code = 1


class ParseError(QstError):
    """Syntax or validation failure in a qst document."""

    exit_code = 1

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InconsistencyError(QstError):
    """A computed object contradicts a structural claim that should hold for it."""

    exit_code = 2


class HorizonError(QstError):
    """The materialized part of the quotient is too short for the requested radius."""

    exit_code = 3


class CapExceededError(QstError):
    """A recurrence search ran past its radius cap without a result."""

    exit_code = 3

    def __init__(self, message: str, best_coverage: int | None = None):
        self.best_coverage = best_coverage
        super().__init__(message)
