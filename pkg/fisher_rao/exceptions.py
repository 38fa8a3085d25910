"""Exception hierarchy for fisher-rao.

Three layers:
- InputError: the caller handed us something outside a family's domain
  (bad point, wrong dimension, mismatched families, non-tangent vector)
- NumericalError: the inputs were valid but a numerical procedure failed
  (geodesic left the manifold, shooting did not converge, singular metric)
- ConfigurationError: invalid solver settings or env file

All inherit from FisherRaoError for catch-all handling. Each layer carries
an ``exit_code`` used by the command-line front end.
"""

from __future__ import annotations

from typing import Any


class FisherRaoError(Exception):
    """Base exception for all package errors."""

    exit_code: int = 1


# ── Layer 1: input errors ───────────────────────────────────────────────────


class InputError(FisherRaoError):
    """Invalid input supplied by the caller."""

    exit_code = 2


class DomainError(InputError, ValueError):
    """Point or argument outside the domain of a function or family."""


class DimensionMismatchError(InputError, ValueError):
    """Arrays whose dimensions do not agree with each other or the manifold.

    Attributes:
        expected: Expected dimension.
        actual: Dimension that was supplied.
    """

    def __init__(self, message: str, *, expected: int, actual: int) -> None:
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class FamilyMismatchError(InputError):
    """Points from different families (or different fixed options) combined."""


class TangencyError(InputError):
    """Vector is not tangent to the manifold at its base point."""


class InfiniteDistanceError(InputError):
    """Distance to a boundary point that lies infinitely far away."""


class UndefinedCurvatureError(InputError):
    """Sectional curvature requested where no tangent 2-plane exists."""


# ── Layer 2: numerical failures ─────────────────────────────────────────────


class NumericalError(FisherRaoError):
    """A numerical procedure failed on valid input."""

    exit_code = 3


class IntegrationError(NumericalError):
    """ODE integration could not reach the end of its time span.

    Attributes:
        t: Time of the last accepted step.
        state: State vector at ``t`` (last valid state).
    """

    def __init__(self, message: str, *, t: float, state: Any = None) -> None:
        super().__init__(message)
        self.t = t
        self.state = state


class IncompleteGeodesicError(IntegrationError):
    """Geodesic left the parameter domain before reaching t=1.

    Attributes:
        exit_time: Last time at which the geodesic was still inside.
    """

    def __init__(self, message: str, *, exit_time: float, state: Any = None) -> None:
        super().__init__(message, t=exit_time, state=state)
        self.exit_time = exit_time


class QuadratureError(NumericalError):
    """Integrand was NaN or infinite at a quadrature node.

    Attributes:
        node: Abscissa (or integer index) where evaluation failed.
    """

    def __init__(self, message: str, *, node: float) -> None:
        super().__init__(message)
        self.node = node


class DifferentiationError(NumericalError):
    """Finite differences could not be evaluated, even with a reduced step.

    Attributes:
        point: Point at which differentiation was attempted.
    """

    def __init__(self, message: str, *, point: Any = None) -> None:
        super().__init__(message)
        self.point = point


class NonConvergenceError(NumericalError):
    """Iterative solver stopped without meeting its tolerance.

    Attributes:
        residual: Best residual norm reached.
        iterate: Iterate corresponding to ``residual``.
    """

    def __init__(self, message: str, *, residual: float, iterate: Any = None) -> None:
        super().__init__(message)
        self.residual = residual
        self.iterate = iterate


class SingularMetricError(NumericalError):
    """Metric matrix could not be inverted at a point.

    Attributes:
        point: Coordinates where the metric is singular.
    """

    def __init__(self, message: str, *, point: Any = None) -> None:
        super().__init__(message)
        self.point = point


class NotPositiveDefiniteError(NumericalError):
    """Computed metric (or covariance) is not positive definite.

    Attributes:
        matrix: The offending matrix.
    """

    def __init__(self, message: str, *, matrix: Any = None) -> None:
        super().__init__(message)
        self.matrix = matrix


class DegeneratePlaneError(NumericalError):
    """Two tangent vectors do not span a 2-plane."""


# ── Layer 3: configuration ──────────────────────────────────────────────────


class ConfigurationError(FisherRaoError):
    """Invalid solver configuration or env file."""

    exit_code = 2
