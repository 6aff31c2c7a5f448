"""
Exception hierarchy shared by every package in the project.

The CLI maps these onto exit codes (see cli/commands.py):
    UsageError           -> 1
    InputValidationError -> 2
    InvariantViolation   -> 3
"""


class SpannerError(Exception):
    """Base class for all errors raised by this project."""


class UsageError(SpannerError, ValueError):
    """A caller broke a precondition (bad argument, wrong dimension, ...)."""


class InputValidationError(SpannerError, ValueError):
    """Malformed input data. `line` is the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoTriangleError(UsageError):
    """Raised when a triangle is requested on fewer than three points."""

    def __init__(self, n):
        super().__init__(f"no triangle exists on {n} point(s)")


class DilationUndefinedError(UsageError):
    """Oriented dilation needs a third point for the minimum triangle."""

    def __init__(self, n):
        super().__init__(f"dilation undefined for {n} point(s), need at least 3")


class EmptyIndexError(UsageError):
    """Nearest-neighbour query against an index with no members."""

    def __init__(self):
        super().__init__("no neighbour: the index is empty")


class InvariantViolation(SpannerError, AssertionError):
    """An internal post-condition did not hold."""
