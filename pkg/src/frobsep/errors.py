"""Exception types shared across the package."""

from __future__ import annotations


class FrobsepError(Exception):
    """Base class for all package errors."""


# --- curve arithmetic


class BadReduction(FrobsepError):
    """The prime divides the model discriminant; no smooth reduction."""


class CeilingExceeded(FrobsepError):
    """A point count was requested above the configured enumeration ceiling."""


class UnsupportedModel(FrobsepError):
    """The model/prime combination is outside the supported counting paths."""


class NonUnitaryRoots(FrobsepError):
    """Unitarized Euler-factor roots deviate from the unit circle."""


# --- trace tables


class SchemaError(FrobsepError):
    """Trace-table CSV has a malformed header or metadata line."""


class ValidationError(FrobsepError):
    """A table entry violates an invariant (Weil bound, ordering, ...)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConflictError(FrobsepError):
    """Two tables disagree on a stored value; never silently resolved."""


class IncompleteTable(FrobsepError):
    """A sum requires primes that the table does not cover."""


class MissingEigendata(FrobsepError):
    """Prime-power terms need eigenvalue angles but only traces are stored."""


# --- representation theory


class NonIntegral(FrobsepError):
    """A quantity that must be an integer came out non-integral (raise quadrature order)."""


class OrderTooSmall(FrobsepError):
    """Quadrature order below the supported minimum."""


# --- kernels and Gamma utilities


class DomainError(FrobsepError):
    """Argument outside of the mathematical domain of the function."""


class PoleInput(FrobsepError):
    """Evaluation requested at a pole."""


# --- separation


class WeilViolation(FrobsepError):
    """A normalized trace lies outside the Weil box [-2g, 2g]."""


class BoundaryCase(FrobsepError):
    """Sign-criterion equivalence degenerates on the Weil-box boundary."""
