"""Manifold descriptions consumed by the geometry engine.

A :class:`ManifoldSpec` is a chart on an open parameter set together with a
metric provider and any closed forms a family knows. Providers are
vectorized: they accept coordinates of shape ``(..., d)``.

Provider conventions:

* ``metric_matrix(x)`` -> ``(..., d, d)``
* ``metric_derivative(x)`` -> ``(..., d, d, d)`` with ``[..., i, j, l] = d_l g_ij``
* ``christoffels(x)`` -> ``(..., d, d, d)`` with ``[..., k, i, j] = Gamma^k_ij``
* ``acceleration(x, v)`` -> ``(..., d)``, the geodesic acceleration ``-Gamma(v, v)``
* ``exp(v, x)``, ``log(y, x)`` -> ``(..., d)``; ``dist(x, y)`` -> ``(...)``
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from fisher_rao._config import SolverConfig
from fisher_rao._types import FloatArray, as_point
from fisher_rao.exceptions import DimensionMismatchError, DomainError

__all__ = [
    "ManifoldSpec",
    "batch_norm",
    "euclidean_spec",
    "inner_product",
    "norm",
]

Provider = Callable[[FloatArray], FloatArray]
PairProvider = Callable[[FloatArray, FloatArray], FloatArray]
Predicate = Callable[[FloatArray], NDArray[np.bool_]]


@dataclass(frozen=True)
class ManifoldSpec:
    """Immutable description of a Riemannian parameter manifold.

    Attributes:
        name: Human-readable identifier used in messages.
        dim: Chart dimension ``d``.
        metric_matrix: Metric provider (required).
        belongs: Extra membership predicate beyond the coordinate bounds.
        metric_derivative: Closed-form metric partials.
        christoffels: Closed-form Christoffel symbols.
        acceleration: Closed-form geodesic acceleration.
        dist: Closed-form geodesic distance.
        exp: Closed-form exponential map.
        log: Closed-form logarithm map.
        lower: Per-coordinate lower bounds (``-inf`` allowed).
        upper: Per-coordinate upper bounds (``inf`` allowed).
        config: Numeric policy for everything computed on this manifold.
    """

    name: str
    dim: int
    metric_matrix: Provider
    belongs: Optional[Predicate] = None
    metric_derivative: Optional[Provider] = None
    christoffels: Optional[Provider] = None
    acceleration: Optional[PairProvider] = None
    dist: Optional[PairProvider] = None
    exp: Optional[PairProvider] = None
    log: Optional[PairProvider] = None
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[float, ...]] = None
    config: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DomainError(f"manifold dimension must be positive, got {self.dim}")
        for label in ("lower", "upper"):
            bounds = getattr(self, label)
            if bounds is not None and len(bounds) != self.dim:
                raise DimensionMismatchError(
                    f"{label} bounds of {self.name} have {len(bounds)} entries, "
                    f"expected {self.dim}",
                    expected=self.dim,
                    actual=len(bounds),
                )

    # ── membership ──────────────────────────────────────────────────────────

    def contains(
        self, x: FloatArray, *, margin: float | None = None
    ) -> NDArray[np.bool_]:
        """Row-wise membership test, honoring ``config.boundary_margin``."""
        x = np.asarray(x, dtype=np.float64)
        pad = self.config.boundary_margin if margin is None else margin
        ok = np.asarray(np.all(np.isfinite(x), axis=-1))
        if self.lower is not None:
            ok &= np.all(x > np.asarray(self.lower) + pad, axis=-1)
        if self.upper is not None:
            ok &= np.all(x < np.asarray(self.upper) - pad, axis=-1)
        if self.belongs is not None and np.any(ok):
            safe = np.where(ok[..., None], x, self.anchor())
            ok &= np.asarray(self.belongs(safe), dtype=bool)
        return ok

    def anchor(self) -> FloatArray:
        """Some interior point, used to pad masked-out rows before evaluation."""
        lo = np.full(self.dim, -np.inf)
        hi = np.full(self.dim, np.inf)
        if self.lower is not None:
            lo = np.asarray(self.lower)
        if self.upper is not None:
            hi = np.asarray(self.upper)
        point = np.zeros(self.dim)
        both = np.isfinite(lo) & np.isfinite(hi)
        point[both] = 0.5 * (lo[both] + hi[both])
        only_lo = np.isfinite(lo) & ~np.isfinite(hi)
        point[only_lo] = lo[only_lo] + 1.0
        only_hi = ~np.isfinite(lo) & np.isfinite(hi)
        point[only_hi] = hi[only_hi] - 1.0
        return point

    def check_point(self, x: object, *, name: str = "point") -> FloatArray:
        """Validate a single point, raising :class:`DomainError` when outside."""
        arr = as_point(x, self.dim, name=name)
        if not bool(self.contains(arr, margin=0.0)):
            raise DomainError(f"{name} {arr.tolist()} is not in {self.name}")
        return arr

    def project(self, x: FloatArray) -> FloatArray:
        """Clip coordinates into the bounds, one margin inside."""
        x = np.asarray(x, dtype=np.float64)
        pad = max(self.config.boundary_margin, 1e-12)
        if self.lower is not None:
            x = np.maximum(x, np.asarray(self.lower) + 2 * pad)
        if self.upper is not None:
            x = np.minimum(x, np.asarray(self.upper) - 2 * pad)
        return x

    # ── variants ────────────────────────────────────────────────────────────

    def without_closed_forms(self) -> ManifoldSpec:
        """Same chart and metric, every derived quantity computed numerically."""
        return dataclasses.replace(
            self,
            name=f"{self.name} (numeric)",
            metric_derivative=None,
            christoffels=None,
            acceleration=None,
            dist=None,
            exp=None,
            log=None,
        )

    def with_config(self, config: SolverConfig) -> ManifoldSpec:
        return dataclasses.replace(self, config=config)


def inner_product(
    u: FloatArray, v: FloatArray, x: FloatArray, spec: ManifoldSpec
) -> float:
    """``u^T G(x) v`` for tangent vectors based at ``x``."""
    x = as_point(x, spec.dim, name="base point")
    u = as_point(u, spec.dim, name="u")
    v = as_point(v, spec.dim, name="v")
    return float(u @ spec.metric_matrix(x) @ v)


def norm(u: FloatArray, x: FloatArray, spec: ManifoldSpec) -> float:
    return float(np.sqrt(max(inner_product(u, u, x, spec), 0.0)))


def batch_norm(v: FloatArray, x: FloatArray, spec: ManifoldSpec) -> FloatArray:
    """Metric norms of rows ``v[i]`` at ``x[i]``."""
    g = spec.metric_matrix(x)
    sq = np.einsum("...i,...ij,...j->...", v, g, v)
    return np.sqrt(np.maximum(sq, 0.0))


def euclidean_spec(dim: int, config: SolverConfig | None = None) -> ManifoldSpec:
    """Flat R^d with straight-line geodesics."""

    def metric(x: FloatArray) -> FloatArray:
        x = np.asarray(x)
        return np.broadcast_to(np.eye(dim), x.shape[:-1] + (dim, dim)).copy()

    def zeros3(x: FloatArray) -> FloatArray:
        return np.zeros(np.shape(x)[:-1] + (dim, dim, dim))

    return ManifoldSpec(
        name=f"euclidean R^{dim}",
        dim=dim,
        metric_matrix=metric,
        metric_derivative=zeros3,
        christoffels=zeros3,
        acceleration=lambda x, v: np.zeros_like(v),
        dist=lambda x, y: np.linalg.norm(np.asarray(y) - np.asarray(x), axis=-1),
        exp=lambda v, x: np.asarray(x) + np.asarray(v),
        log=lambda y, x: np.asarray(y) - np.asarray(x),
        config=config or SolverConfig(),
    )
