"""Exception hierarchy shared by the library and the CLI."""


class ArgzetaError(Exception):
    """Base class for all library errors."""


class DomainError(ArgzetaError, ValueError):
    """An argument lies outside the domain of an operation."""


class CoverageError(ArgzetaError, ValueError):
    """A zero table does not cover the range an operation needs."""


class ZeroTableParseError(ArgzetaError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnresolvedIntervalError(ArgzetaError, RuntimeError):
    """Zero isolation could not account for every zero in an interval."""

    def __init__(self, lo, hi, detail=""):
        self.interval = (lo, hi)
        msg = f"unresolved interval ({lo!r}, {hi!r})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CapacityError(ArgzetaError, ValueError):
    """A table or sieve is too small (or would be too large) for a request."""


class FormulaViolationError(ArgzetaError, RuntimeError):
    """The two sides of the explicit formula disagree beyond the error budget."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class PropertyViolationError(ArgzetaError, RuntimeError):
    """An empirical property expected of verified data does not hold."""


class ConsistencyError(ArgzetaError, RuntimeError):
    """Two independent evaluations of the same quantity disagree."""
