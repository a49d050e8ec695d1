"""Exception types shared across the package.

The CLI maps these onto process exit codes: validation/format problems
exit 2, blown resource budgets exit 3, failed verification assertions
exit 4.
"""


class RipsepError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(RipsepError, ValueError):
    """Input data violates a documented precondition."""


class FormatError(ValidationError):
    """A file or stream is malformed (bad CSV, bad JSON schema, ...)."""


class BudgetError(RipsepError, RuntimeError):
    """A configurable resource budget (e.g. simplex count) was exceeded."""


class StabilityError(RipsepError, RuntimeError):
    """A verification inequality that must hold was violated."""
