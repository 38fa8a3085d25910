"""Dirichlet family on ``(0, inf)^n`` and the beta family (``n = 2``).

The Fisher metric is ``I(a) = diag(psi'(a_i)) - psi'(abar) 11^T`` with
``abar = sum a_i``. Geodesics have no closed form. Their acceleration is
evaluated in O(n) per point from the metric partials

    d_l I_ij = psi''(a_i) delta_ij delta_il - psi''(abar),

which reduce the geodesic equation to ``a'' = -1/2 I^-1 w`` with
``w_l = psi''(a_l) u_l^2 - psi''(abar) (sum u)^2``; ``I^-1`` is applied
with the Sherman-Morrison formula.

The manifold is isometric to a hypersurface of Minkowski space through
``a -> (eta(a_1), ..., eta(a_n), eta(abar))`` where ``eta' = sqrt(psi')``
and ``eta(1) = 0``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Callable

import numpy as np

from fisher_rao._config import SolverConfig
from fisher_rao._types import FloatArray, as_array
from fisher_rao.exceptions import DimensionMismatchError, DomainError
from fisher_rao.families._base import (
    InformationManifold,
    RandomState,
    as_generator,
    check_count,
)
from fisher_rao.geometry import ManifoldSpec
from fisher_rao.numerics.quadrature import adaptive_quadrature
from fisher_rao.numerics.special import ln_gamma, trigamma, trigamma_tetragamma

if TYPE_CHECKING:
    from fisher_rao.generic import DensityModel

__all__ = ["Beta", "Dirichlet", "minkowski_coord"]

SIMPLEX_TOL = 1e-9


def minkowski_coord(x: float) -> float:
    """``eta(x) = int_1^x sqrt(psi'(t)) dt``."""
    if not x > 0:
        raise DomainError(f"minkowski_coord requires x > 0, got {x!r}")
    return adaptive_quadrature(lambda t: np.sqrt(trigamma(t)), 1.0, float(x))


def _metric(x: FloatArray) -> FloatArray:
    n = x.shape[-1]
    total = np.sum(x, axis=-1)
    diag = np.eye(n) * np.asarray(trigamma(x))[..., None, :]
    return diag - np.asarray(trigamma(total))[..., None, None]


def _metric_derivative(x: FloatArray) -> FloatArray:
    n = x.shape[-1]
    _, tetra = trigamma_tetragamma(x)
    _, tetra_total = trigamma_tetragamma(np.sum(x, axis=-1))
    out = np.broadcast_to(
        -np.asarray(tetra_total)[..., None, None, None], x.shape[:-1] + (n, n, n)
    ).copy()
    idx = np.arange(n)
    out[..., idx, idx, idx] += tetra
    return out


def _acceleration(x: FloatArray, v: FloatArray) -> FloatArray:
    total = np.sum(x, axis=-1)
    tri, tetra = trigamma_tetragamma(x)
    tri_total, tetra_total = trigamma_tetragamma(total)
    speed = np.sum(v, axis=-1)
    w = tetra * v * v - (tetra_total * speed * speed)[..., None]
    inv_d_w = w / tri
    inv_d_one = 1.0 / tri
    correction = (
        tri_total
        * np.sum(inv_d_w, axis=-1)
        / (1.0 - tri_total * np.sum(inv_d_one, axis=-1))
    )
    return -0.5 * (inv_d_w + correction[..., None] * inv_d_one)


class Dirichlet(InformationManifold):
    """Dirichlet distributions with ``n >= 2`` concentration parameters."""

    def __init__(self, n: int, config: SolverConfig | None = None) -> None:
        if int(n) != n or n < 2:
            raise DomainError(f"dirichlet needs n >= 2 parameters, got {n!r}")
        self.n = int(n)
        super().__init__(config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"dirichlet(n={self.n})"

    def _build_spec(self) -> ManifoldSpec:
        return ManifoldSpec(
            name=self.name,
            dim=self.n,
            metric_matrix=_metric,
            metric_derivative=_metric_derivative,
            acceleration=_acceleration,
            lower=(0.0,) * self.n,
            upper=(np.inf,) * self.n,
            config=self.config,
        )

    # ── Minkowski embedding ─────────────────────────────────────────────────

    def minkowski_embedding(self, point: Any) -> FloatArray:
        """``(eta(a_1), ..., eta(a_n), eta(abar))``."""
        alpha = self._chart(point)
        values = [*alpha, float(np.sum(alpha))]
        return np.array([minkowski_coord(a) for a in values])

    def minkowski_pushforward(self, u: Any, point: Any) -> FloatArray:
        """Differential of :meth:`minkowski_embedding` applied to ``u``."""
        alpha = self._chart(point)
        du = self._chart_tangent(u, alpha)
        scale = np.sqrt(np.asarray(trigamma(alpha)))
        last = np.sqrt(trigamma(float(np.sum(alpha)))) * float(np.sum(du))
        return np.append(scale * du, last)

    @staticmethod
    def minkowski_inner(a: FloatArray, b: FloatArray) -> float:
        """``sum a_i b_i - a_(n+1) b_(n+1)``."""
        return float(np.dot(a[:-1], b[:-1]) - a[-1] * b[-1])

    # ── statistics ──────────────────────────────────────────────────────────

    def _simplex(self, xs: Any) -> FloatArray:
        arr = np.asarray(xs, dtype=np.float64)
        if arr.shape[-1] != self.n:
            raise DimensionMismatchError(
                f"observations must have {self.n} coordinates, got {arr.shape}",
                expected=self.n,
                actual=arr.shape[-1],
            )
        if np.any(arr < 0) or np.any(np.abs(np.sum(arr, axis=-1) - 1.0) > SIMPLEX_TOL):
            raise DomainError(f"{arr.tolist()} is not on the simplex")
        return arr

    def _log_norm(self, alpha: FloatArray) -> float:
        return float(ln_gamma(float(np.sum(alpha)))) - float(np.sum(ln_gamma(alpha)))

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        alpha = self._chart(point)
        log_norm = self._log_norm(alpha)

        def density(xs: Any) -> Any:
            arr = self._simplex(xs)
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(alpha == 1.0, 0.0, (alpha - 1.0) * np.log(arr))
            out = np.exp(log_norm + np.sum(terms, axis=-1))
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        alpha = self._chart(point)
        return as_generator(rng).dirichlet(alpha, size=check_count(count))

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        return rng.uniform(0.5, 5.0, size=self.n)


class Beta(Dirichlet):
    """Beta distributions ``(alpha, beta)``; the Dirichlet family with ``n = 2``.

    Densities and samples are over the first coordinate ``x`` of ``(x, 1 - x)``.
    """

    def __init__(self, config: SolverConfig | None = None) -> None:
        super().__init__(2, config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return "beta"

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        alpha = self._chart(point)
        log_norm = self._log_norm(alpha)

        def density(xs: Any) -> Any:
            arr = as_array(xs, name="observation")
            if np.any(arr < 0) or np.any(arr > 1):
                raise DomainError(f"{arr.tolist()} is outside [0, 1]")
            with np.errstate(divide="ignore", invalid="ignore"):
                left = np.where(alpha[0] == 1.0, 0.0, (alpha[0] - 1.0) * np.log(arr))
                right = np.where(
                    alpha[1] == 1.0, 0.0, (alpha[1] - 1.0) * np.log1p(-arr)
                )
            out = np.exp(log_norm + left + right)
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        a, b = self._chart(point)
        return as_generator(rng).beta(a, b, size=check_count(count))

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import beta_model

        return beta_model()
