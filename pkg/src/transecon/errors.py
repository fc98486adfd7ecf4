"""Exception hierarchy shared by all modules.

The CLI maps each class to a distinct exit status, so library code should
raise the most specific class that applies.
"""


class TransitionError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TransitionError, ValueError):
    """Malformed input text. ``line`` is the 1-based line number, if known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TransitionError, ValueError):
    """Input parsed fine but violates a data invariant (gaps, signs, ...)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(TransitionError, ValueError):
    """Numerical argument outside the domain of a model equation."""


class ConfigurationError(TransitionError, ValueError):
    """Inconsistent configuration, e.g. an empty feasible parameter grid."""
