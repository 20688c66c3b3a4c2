"""Exception hierarchy shared by every :mod:`semiorbit` module."""
from __future__ import annotations

from typing import Any


class SemiOrbitError(Exception):
    """Root of all errors raised by the library."""


class ExpressionSyntaxError(SemiOrbitError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifierError(SemiOrbitError):
    def __init__(self, name: str, position: int, expected: str):
        super().__init__(
            f"Unknown identifier '{name}' at position {position}: "
            f"the only free variable is '{expected}'"
        )
        self.name = name
        self.position = position


class DomainError(SemiOrbitError, ValueError):
    """A value left the domain of a function or violated a precondition."""

    def __init__(self, message: str, point: Any = None):
        super().__init__(message)
        self.point = point


class NotBracketedError(SemiOrbitError):
    pass


class NonMonotoneError(SemiOrbitError):
    pass


class NoOrbitError(SemiOrbitError):
    def __init__(self, message: str, roots_found: int = 0):
        super().__init__(message)
        self.roots_found = roots_found


class UnstableOrbitError(SemiOrbitError):
    def __init__(self, r0: float, k: float):
        super().__init__(
            f"Effective stiffness k={k:.6g} is not positive at r0={r0:.6g}: "
            "no harmonic radial motion around this orbit"
        )
        self.r0 = r0
        self.k = k


class DegenerateLambdaError(SemiOrbitError):
    """Raised when the orbital factor vanishes; the WKB solver handles that case."""


class NoConvergenceError(SemiOrbitError):
    def __init__(self, message: str, iterations: int):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations
