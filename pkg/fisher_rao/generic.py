"""Numeric Fisher-Rao metric for user-supplied parametric densities.

A :class:`DensityModel` bundles a vectorized log-density with its sample
space. The Fisher information

    I(theta) = -E[ Hess_theta log f(X | theta) ]

is evaluated by central second differences of ``log f`` at every
quadrature node and a Gauss-Legendre rule (or an integer sum) over the
support. :func:`as_manifold` turns a model into a :class:`ManifoldSpec`, so
every operation of the geometry engine works on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from fisher_rao._config import SolverConfig, resolve_solver_config
from fisher_rao._logging import logger
from fisher_rao._types import FloatArray, as_point
from fisher_rao.exceptions import DomainError, NotPositiveDefiniteError
from fisher_rao.geometry import ManifoldSpec, christoffels
from fisher_rao.numerics.differentiation import fd_derivative
from fisher_rao.numerics.quadrature import QuadratureRule, quadrature_expectation
from fisher_rao.numerics.special import ln_gamma

__all__ = [
    "DensityModel",
    "IntegerSupport",
    "RealSupport",
    "as_manifold",
    "bernoulli_model",
    "beta_model",
    "binomial_model",
    "exponential_model",
    "fisher_christoffels",
    "fisher_matrix",
    "gamma_model",
    "geometric_model",
    "normal_model",
    "poisson_model",
]

LogDensity = Callable[[FloatArray, FloatArray], FloatArray]

# Relative step for differentiating the numeric metric itself.
METRIC_DERIVATIVE_STEP = 1e-3

# Shooting and integration tolerances below the metric's own accuracy
# only cost time.
_LOOSEST_RTOL = 1e-8
_LOOSEST_ATOL = 1e-10
_LOOSEST_LOG_TOL = 1e-7


@dataclass(frozen=True)
class RealSupport:
    """Interval ``[lower, upper]`` integrated with Gauss-Legendre.

    ``nodes=None`` takes the count from ``SolverConfig.quadrature_nodes``.
    """

    lower: float
    upper: float
    nodes: Optional[int] = None

    def rule(self, config: SolverConfig) -> QuadratureRule:
        nodes = self.nodes if self.nodes is not None else config.quadrature_nodes
        return QuadratureRule(self.lower, self.upper, nodes)


@dataclass(frozen=True)
class IntegerSupport:
    """Integers ``lower..upper``; ``upper=None`` sums until the tail is negligible."""

    lower: int = 0
    upper: Optional[int] = None

    def rule(self, config: SolverConfig) -> QuadratureRule:
        return QuadratureRule(self.lower, self.upper, discrete=True)


Support = Union[RealSupport, IntegerSupport]


@dataclass(frozen=True)
class DensityModel:
    """A parametric family given only by its log-density.

    Attributes:
        name: Identifier used in messages.
        dim: Parameter dimension ``d``.
        log_density: ``(xs, theta) -> log f(xs | theta)``. ``xs`` is a 1-D
            array of observations and ``theta`` has shape ``(..., d)``; the
            result has shape ``(..., len(xs))``. Must return NaN (not raise)
            for parameters outside the family.
        support: Sample space the expectation runs over.
        lower: Per-parameter lower bounds of the parameter domain.
        upper: Per-parameter upper bounds of the parameter domain.
    """

    name: str
    dim: int
    log_density: LogDensity
    support: Support
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DomainError(f"parameter dimension must be positive, got {self.dim}")


# ── Fisher information ──────────────────────────────────────────────────────


def _fisher_batch(
    model: DensityModel, thetas: FloatArray, config: SolverConfig
) -> FloatArray:
    """Fisher matrices at rows of ``thetas`` (shape ``(..., d)``), unchecked."""
    thetas = np.asarray(thetas, dtype=np.float64)
    lead = thetas.shape[:-1]
    flat = thetas.reshape(-1, model.dim)

    def integrand(xs: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            hess = fd_derivative(lambda th: model.log_density(xs, th), flat, 2)
            weight = np.exp(model.log_density(xs, flat))
        # nodes first: (N, M, d, d)
        return np.moveaxis(-hess * weight[..., None, None], -3, 0)

    info = np.asarray(quadrature_expectation(integrand, model.support.rule(config)))
    info = 0.5 * (info + np.swapaxes(info, -1, -2))
    return info.reshape(lead + (model.dim, model.dim))


def fisher_matrix(
    model: DensityModel, theta: object, *, config: SolverConfig | None = None
) -> FloatArray:
    """Fisher information matrix of ``model`` at ``theta``.

    Raises:
        NotPositiveDefiniteError: the computed matrix is not positive
            definite, usually because the support misses mass or the rule
            has too few nodes.
    """
    cfg = config if config is not None else resolve_solver_config()
    x = as_point(theta, model.dim, name="parameter")
    info = _fisher_batch(model, x, cfg)
    smallest = float(np.min(np.linalg.eigvalsh(info)))
    if not smallest > 0.0:
        raise NotPositiveDefiniteError(
            f"Fisher matrix of {model.name} at {x.tolist()} has eigenvalue "
            f"{smallest:.3e}; widen the support or increase the node count",
            matrix=info,
        )
    logger.debug("fisher matrix of %s at %s: %s", model.name, x.tolist(), info.tolist())
    return info


def as_manifold(
    model: DensityModel, config: SolverConfig | None = None
) -> ManifoldSpec:
    """Parameter manifold of ``model`` with the numeric Fisher metric.

    Integrator and shooting tolerances are relaxed to ``rtol >= 1e-8``,
    ``atol >= 1e-10`` and ``log_tol >= 1e-7`` to match the accuracy of the
    metric.
    """
    cfg = config if config is not None else resolve_solver_config()
    cfg = cfg.replace(
        rtol=max(cfg.rtol, _LOOSEST_RTOL),
        atol=max(cfg.atol, _LOOSEST_ATOL),
        log_tol=max(cfg.log_tol, _LOOSEST_LOG_TOL),
    )

    def metric(x: FloatArray) -> FloatArray:
        return _fisher_batch(model, x, cfg)

    def metric_derivative(x: FloatArray) -> FloatArray:
        return fd_derivative(metric, x, 1, step=METRIC_DERIVATIVE_STEP)

    return ManifoldSpec(
        name=f"{model.name} (numeric Fisher metric)",
        dim=model.dim,
        metric_matrix=metric,
        metric_derivative=metric_derivative,
        lower=model.lower,
        upper=model.upper,
        config=cfg,
    )


def fisher_christoffels(
    model: DensityModel, theta: object, *, config: SolverConfig | None = None
) -> FloatArray:
    """Christoffel symbols ``[k, i, j]`` of the numeric Fisher metric."""
    return christoffels(as_manifold(model, config), theta)


# ── built-in models ─────────────────────────────────────────────────────────


def _col(theta: FloatArray, i: int) -> FloatArray:
    return theta[..., i, None]


def _ln_gamma(x: FloatArray) -> FloatArray:
    """ln_gamma that maps non-positive arguments to NaN."""
    ok = x > 0
    return np.where(ok, ln_gamma(np.where(ok, x, 1.0)), np.nan)


def normal_model(
    lower: float = -10.0, upper: float = 10.0, nodes: int | None = None
) -> DensityModel:
    """Univariate normal in ``(m, sigma)``."""
    half_log_2pi = 0.5 * math.log(2.0 * math.pi)

    def log_density(xs: FloatArray, theta: FloatArray) -> FloatArray:
        m, s = _col(theta, 0), _col(theta, 1)
        return -half_log_2pi - np.log(s) - (xs - m) ** 2 / (2.0 * s * s)

    return DensityModel(
        name="normal",
        dim=2,
        log_density=log_density,
        support=RealSupport(lower, upper, nodes),
        lower=(-np.inf, 0.0),
        upper=(np.inf, np.inf),
    )


def exponential_model(upper: float = 40.0, nodes: int | None = None) -> DensityModel:
    """Exponential with rate ``lambda``."""

    def log_density(xs: FloatArray, theta: FloatArray) -> FloatArray:
        lam = _col(theta, 0)
        return np.log(lam) - lam * xs

    return DensityModel(
        name="exponential",
        dim=1,
        log_density=log_density,
        support=RealSupport(0.0, upper, nodes),
        lower=(0.0,),
        upper=(np.inf,),
    )


def poisson_model() -> DensityModel:
    def log_density(ks: FloatArray, theta: FloatArray) -> FloatArray:
        lam = _col(theta, 0)
        return ks * np.log(lam) - lam - ln_gamma(ks + 1.0)

    return DensityModel(
        name="poisson",
        dim=1,
        log_density=log_density,
        support=IntegerSupport(0),
        lower=(0.0,),
        upper=(np.inf,),
    )


def binomial_model(n: int) -> DensityModel:
    if int(n) != n or n < 1:
        raise DomainError(f"binomial n must be a positive integer, got {n!r}")
    n = int(n)
    log_n_fact = float(ln_gamma(n + 1.0))

    def log_density(ks: FloatArray, theta: FloatArray) -> FloatArray:
        p = _col(theta, 0)
        coeff = log_n_fact - ln_gamma(ks + 1.0) - ln_gamma(n - ks + 1.0)
        return coeff + ks * np.log(p) + (n - ks) * np.log1p(-p)

    return DensityModel(
        name=f"binomial(n={n})",
        dim=1,
        log_density=log_density,
        support=IntegerSupport(0, n),
        lower=(0.0,),
        upper=(1.0,),
    )


def bernoulli_model() -> DensityModel:
    model = binomial_model(1)
    return DensityModel(
        name="bernoulli",
        dim=1,
        log_density=model.log_density,
        support=model.support,
        lower=model.lower,
        upper=model.upper,
    )


def geometric_model() -> DensityModel:
    """Number of trials up to and including the first success."""

    def log_density(ks: FloatArray, theta: FloatArray) -> FloatArray:
        p = _col(theta, 0)
        return (ks - 1.0) * np.log1p(-p) + np.log(p)

    return DensityModel(
        name="geometric",
        dim=1,
        log_density=log_density,
        support=IntegerSupport(1),
        lower=(0.0,),
        upper=(1.0,),
    )


def gamma_model(upper: float = 60.0, nodes: int | None = None) -> DensityModel:
    """Gamma in ``(kappa, gamma)``: shape and mean."""

    def log_density(xs: FloatArray, theta: FloatArray) -> FloatArray:
        k, g = _col(theta, 0), _col(theta, 1)
        return (
            k * np.log(k / g)
            - _ln_gamma(k)
            + (k - 1.0) * np.log(xs)
            - k * xs / g
        )

    return DensityModel(
        name="gamma",
        dim=2,
        log_density=log_density,
        support=RealSupport(0.0, upper, nodes),
        lower=(0.0, 0.0),
        upper=(np.inf, np.inf),
    )


def beta_model(nodes: int | None = None) -> DensityModel:
    def log_density(xs: FloatArray, theta: FloatArray) -> FloatArray:
        a, b = _col(theta, 0), _col(theta, 1)
        return (
            _ln_gamma(a + b)
            - _ln_gamma(a)
            - _ln_gamma(b)
            + (a - 1.0) * np.log(xs)
            + (b - 1.0) * np.log1p(-xs)
        )

    return DensityModel(
        name="beta",
        dim=2,
        log_density=log_density,
        support=RealSupport(0.0, 1.0, nodes),
        lower=(0.0, 0.0),
        upper=(np.inf, np.inf),
    )
