"""Two-parameter gamma family in ``(kappa, gamma)`` coordinates.

``kappa`` is the shape and ``gamma = kappa / nu`` the mean, where ``nu`` is
the rate. In these coordinates the metric is diagonal,

    ds^2 = (psi'(kappa) - 1/kappa) dkappa^2 + kappa / gamma^2 dgamma^2,

geodesics have no closed form and are integrated numerically with the
closed-form Christoffel symbols below. The sectional curvature depends on
``kappa`` only and lies strictly between -1/2 and -1/4.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Callable

import numpy as np

from fisher_rao._types import FloatArray, as_array
from fisher_rao.exceptions import DomainError
from fisher_rao.families._base import (
    InformationManifold,
    RandomState,
    as_generator,
    check_count,
)
from fisher_rao.geometry import ManifoldSpec
from fisher_rao.numerics.special import ln_gamma, trigamma, trigamma_tetragamma

if TYPE_CHECKING:
    from fisher_rao.generic import DensityModel

__all__ = [
    "Gamma",
    "gamma_curvature",
    "natural_to_scale",
    "scale_to_natural",
]


def gamma_curvature(kappa: Any) -> Any:
    """``(psi'(k) + k psi''(k)) / (4 (k psi'(k) - 1)^2)``."""
    k = np.asarray(kappa, dtype=np.float64)
    if np.any(k <= 0):
        raise DomainError(f"kappa must be positive, got {k.tolist()}")
    tri, tetra = trigamma_tetragamma(k)
    out = (tri + k * tetra) / (4.0 * (k * tri - 1.0) ** 2)
    return float(out) if np.ndim(out) == 0 else out


def natural_to_scale(point: Any) -> FloatArray:
    """``(kappa, nu) -> (kappa, kappa / nu)``."""
    arr = as_array(point, name="point")
    return np.stack([arr[..., 0], arr[..., 0] / arr[..., 1]], axis=-1)


def scale_to_natural(point: Any) -> FloatArray:
    """``(kappa, gamma) -> (kappa, kappa / gamma)``; see :func:`natural_to_scale`."""

    arr = as_array(point, name="point")
    return np.stack([arr[..., 0], arr[..., 0] / arr[..., 1]], axis=-1)


def _metric(x: FloatArray) -> FloatArray:
    k, g = x[..., 0], x[..., 1]
    out = np.zeros(x.shape[:-1] + (2, 2))
    out[..., 0, 0] = trigamma(k) - 1.0 / k
    out[..., 1, 1] = k / (g * g)
    return out


def _metric_derivative(x: FloatArray) -> FloatArray:
    k, g = x[..., 0], x[..., 1]
    _, tetra = trigamma_tetragamma(k)
    out = np.zeros(x.shape[:-1] + (2, 2, 2))
    out[..., 0, 0, 0] = tetra + 1.0 / (k * k)
    out[..., 1, 1, 0] = 1.0 / (g * g)
    out[..., 1, 1, 1] = -2.0 * k / g**3
    return out


def _christoffels(x: FloatArray) -> FloatArray:
    k, g = x[..., 0], x[..., 1]
    tri, tetra = trigamma_tetragamma(k)
    excess = k * tri - 1.0
    out = np.zeros(x.shape[:-1] + (2, 2, 2))
    out[..., 0, 0, 0] = (tetra * k * k + 1.0) / (2.0 * k * excess)
    out[..., 0, 1, 1] = -k / (2.0 * g * g * excess)
    out[..., 1, 0, 1] = out[..., 1, 1, 0] = 0.5 / k
    out[..., 1, 1, 1] = -1.0 / g
    return out


class Gamma(InformationManifold):
    """Gamma distributions with shape ``kappa`` and mean ``gamma``."""

    name = "gamma"

    def _build_spec(self) -> ManifoldSpec:
        return ManifoldSpec(
            name=self.name,
            dim=2,
            metric_matrix=_metric,
            metric_derivative=_metric_derivative,
            christoffels=_christoffels,
            lower=(0.0, 0.0),
            upper=(np.inf, np.inf),
            config=self.config,
        )

    def natural_spec(self) -> ManifoldSpec:
        """The same family in ``(kappa, nu)`` coordinates, ``nu`` the rate."""

        def metric(x: FloatArray) -> FloatArray:
            k, nu = x[..., 0], x[..., 1]
            out = np.empty(x.shape[:-1] + (2, 2))
            out[..., 0, 0] = trigamma(k)
            out[..., 0, 1] = out[..., 1, 0] = -1.0 / nu
            out[..., 1, 1] = k / (nu * nu)
            return out

        def metric_derivative(x: FloatArray) -> FloatArray:
            k, nu = x[..., 0], x[..., 1]
            _, tetra = trigamma_tetragamma(k)
            out = np.zeros(x.shape[:-1] + (2, 2, 2))
            out[..., 0, 0, 0] = tetra
            out[..., 1, 1, 0] = 1.0 / (nu * nu)
            out[..., 0, 1, 1] = out[..., 1, 0, 1] = 1.0 / (nu * nu)
            out[..., 1, 1, 1] = -2.0 * k / nu**3
            return out

        return ManifoldSpec(
            name="gamma (kappa, nu)",
            dim=2,
            metric_matrix=metric,
            metric_derivative=metric_derivative,
            lower=(0.0, 0.0),
            upper=(np.inf, np.inf),
            config=self.config,
        )

    def fixed_kappa_dist(self, gamma1: float, gamma2: float, kappa: float) -> float:
        """Distance within the submanifold of fixed shape: ``sqrt(k) |log(g1/g2)|``."""
        if min(gamma1, gamma2, kappa) <= 0:
            raise DomainError(
                f"fixed-kappa distance needs positive arguments, got "
                f"{gamma1!r}, {gamma2!r}, {kappa!r}"
            )
        return float(np.sqrt(kappa) * abs(np.log(gamma1 / gamma2)))

    def sectional_curvature(self, point: Any, u: Any = None, v: Any = None) -> float:
        """Closed-form ``K(kappa)``; every 2-plane is the whole tangent space."""
        return float(gamma_curvature(self._chart(point)[0]))

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        k, g = self._chart(point)
        norm = k * np.log(k) - k * np.log(g) - float(ln_gamma(k))

        def density(xs: Any) -> Any:
            arr = np.asarray(xs, dtype=np.float64)
            positive = arr > 0
            safe = np.where(positive, arr, 1.0)
            out = np.where(
                positive, np.exp(norm + (k - 1.0) * np.log(safe) - k * safe / g), 0.0
            )
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        k, g = self._chart(point)
        return as_generator(rng).gamma(k, g / k, size=check_count(count))

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        return np.array([rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0)])

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import gamma_model

        return gamma_model()
