"""Exception types shared across the package."""

from __future__ import annotations


class WcsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WcsError):
    """Syntax error in program, observation, or context text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class GroundingError(WcsError):
    """A non-ground program cannot be instantiated."""


class FrameworkError(WcsError):
    """Invalid abductive framework construction."""


class NoExplanationError(WcsError):
    """Raised when an operation requires an explainable observation."""


class OracleBoundError(WcsError):
    """The brute-force oracle was asked to exceed its enumeration bound."""


class FixpointError(WcsError):
    """Internal error: the model iteration failed to converge in bound."""
