"""Exception types shared by the experiment modules.

All of them subclass ``ValueError`` so callers that only care about
"bad input" can catch one thing; the CLI maps them to exit code 3.
"""


class RangeError(ValueError):
    """Bounds outside the supported range."""


class DomainError(ValueError):
    """Input outside the mathematical domain (e.g. a rational square root)."""


class PreconditionError(ValueError):
    """A stated precondition does not hold (e.g. composite modulus)."""
