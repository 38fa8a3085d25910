"""Special functions, quadrature, ODE integration and finite differences."""

from fisher_rao.numerics.differentiation import fd_derivative
from fisher_rao.numerics.ode import (
    BatchOdeResult,
    OdeProblem,
    OdeSolution,
    integrate_ode,
    integrate_ode_batch,
)
from fisher_rao.numerics.quadrature import (
    QuadratureRule,
    adaptive_quadrature,
    gauss_legendre,
    quadrature_expectation,
)
from fisher_rao.numerics.special import (
    digamma,
    ln_gamma,
    polygamma,
    tetragamma,
    trigamma,
    trigamma_tetragamma,
)

__all__ = [
    "BatchOdeResult",
    "OdeProblem",
    "OdeSolution",
    "QuadratureRule",
    "adaptive_quadrature",
    "digamma",
    "fd_derivative",
    "gauss_legendre",
    "integrate_ode",
    "integrate_ode_batch",
    "ln_gamma",
    "polygamma",
    "quadrature_expectation",
    "tetragamma",
    "trigamma",
    "trigamma_tetragamma",
]
