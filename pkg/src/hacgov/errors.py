"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: validation/schema/syntax
problems are input errors (exit 2), exhausted search budgets exit 4, and
failed internal consistency checks (e.g. a phase-transition violation)
exit 3.
"""

from __future__ import annotations


class HacError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(HacError):
    """An input value violates a declared invariant.

    ``issues`` lists every violation found as ``(field, message)`` pairs so
    callers can report them all at once instead of one per run.
    """

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [("", issues)]
        self.issues = list(issues)
        lines = [f"{field}: {msg}" if field else msg for field, msg in self.issues]
        super().__init__("; ".join(lines))


class SchemaError(HacError):
    """A document is structurally valid but does not match the schema."""


class DocumentSyntaxError(HacError):
    """A document could not be parsed at all."""


class DegenerateDistributionError(HacError):
    """An estimator's input distribution carries no usable entropy."""


class BudgetExceededError(HacError):
    """A configurable search budget was exhausted before completion."""

    def __init__(self, message, budget):
        super().__init__(message)
        self.budget = budget


class InternalCheckError(HacError):
    """A hard internal consistency check failed (carries a witness)."""
