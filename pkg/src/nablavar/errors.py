"""Domain errors raised across the package.

Every error derives from `NablavarError`, itself a `ValueError`, so callers
can catch the whole family at once. The CLI prints these verbatim and exits
with status 1.
"""

from __future__ import annotations

from typing import Any


class NablavarError(ValueError):
    """Base class for all domain errors."""


# ---------------------------------------------------------------------------
# Time scales
# ---------------------------------------------------------------------------


class EmptyScale(NablavarError):
    """Fewer than two points remain after building a time scale."""


class BadParam(NablavarError):
    """A family parameter is out of range (h <= 0, q <= 1, a >= b, ...)."""


class NotInScale(NablavarError):
    """A point is not a member of the time scale."""


class Degenerate(NablavarError):
    """An index or interval is outside what the scale can represent."""


class HViolated(NablavarError):
    """The scale does not satisfy rho(t) = a1*t + a0 for any affine law."""

    def __init__(self, point: float, defect: float, tolerance: float) -> None:
        """Record the worst-offending point and its defect."""
        self.point = point
        self.defect = defect
        self.tolerance = tolerance
        super().__init__(
            f"condition (H) violated at t={point!r}: "
            f"|rho(t) - a1*t - a0| = {defect:.3e} > {tolerance:.3e}"
        )


# ---------------------------------------------------------------------------
# Grid functions
# ---------------------------------------------------------------------------


class DomainTooSmall(NablavarError):
    """The domain of a grid function has too few points for the operator."""


class NotInDomain(NablavarError):
    """An integration limit or evaluation point lies outside the domain."""


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


class ExpressionSyntaxError(NablavarError):
    """The Lagrangian source text is not well formed."""

    def __init__(self, message: str, offset: int) -> None:
        """Record the byte offset of the offending token."""
        self.offset = offset
        super().__init__(f"{message} (at byte {offset})")


class UnknownIdentifier(NablavarError):
    """A name is neither t, an admissible u_i, nor a known function."""


class ArityError(NablavarError):
    """A function was called with the wrong number of arguments."""


class EvalError(NablavarError):
    """Real evaluation is undefined (log of non-positive, division by zero, ...)."""


# ---------------------------------------------------------------------------
# Variational problems and solvers
# ---------------------------------------------------------------------------


class NotAdmissible(NablavarError):
    """A candidate function violates the pinned boundary rows."""


class NotAdmissibleVariation(NablavarError):
    """A variation does not vanish on the boundary rows."""


class DegenerateProblem(NablavarError):
    """The scale has exactly 2r points, so nothing is left to optimize."""


class NotConverged(NablavarError):
    """An iterative solver exhausted its iteration budget."""

    def __init__(self, message: str, solution: Any = None) -> None:
        """Keep the best iterate so callers can still report it."""
        self.solution = solution
        super().__init__(message)


class SingularJacobian(NablavarError):
    """The Newton Jacobian cannot be solved against."""


class TooLarge(NablavarError):
    """A brute-force enumeration exceeds the candidate guard."""


class CsvFormatError(NablavarError):
    """A grid-function CSV is malformed or does not follow the scale."""
