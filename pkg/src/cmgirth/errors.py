"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the classes coarse.
"""


class CmGirthError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CmGirthError, ValueError):
    """Malformed or inconsistent input (bad polynomial, cross-ring operation, ...)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        elif column is not None:
            message = f"column {column}: {message}"
        super().__init__(message)


class PreconditionError(CmGirthError):
    """An operation was called on an object outside its domain of definition."""


class HypothesisError(PreconditionError):
    """The hypotheses of a bound theorem do not hold for this instance."""


class ResourceError(CmGirthError):
    """A configured size or retry budget was exhausted."""


class InvariantViolation(CmGirthError, AssertionError):
    """An internal certificate failed to verify. Always a bug."""
