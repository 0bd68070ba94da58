"""Exception types shared across the package."""


class PermstabError(ValueError):
    """Base class for all input/contract errors raised by this package."""


class FormatError(PermstabError):
    """A file could not be parsed; carries a line number when available."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ExactSearchRefused(PermstabError):
    """An exhaustive enumeration was requested beyond the supported size."""


class BoundViolation(RuntimeError):
    """A proved inequality failed on a run; this signals an implementation bug."""
