"""Multinomial and categorical families on the open simplex.

The map ``theta -> 2 sqrt(n theta)`` sends the simplex isometrically onto
the positive orthant of the sphere of radius ``2 sqrt(n)``, so distances
are great-circle arcs and geodesics are slerps of the sphere images. The
sectional curvature is that of the sphere, ``1 / (4 n)``.

Public points are full probability vectors of length ``k``; matrix-form
operations use the chart made of the first ``k - 1`` coordinates.
"""

from __future__ import annotations

from typing import Any, Callable

import numpy as np

from fisher_rao._config import SolverConfig
from fisher_rao._types import FloatArray, as_array
from fisher_rao.exceptions import (
    DimensionMismatchError,
    DomainError,
    TangencyError,
    UndefinedCurvatureError,
)
from fisher_rao.families._base import (
    InformationManifold,
    RandomState,
    as_generator,
    check_count,
    map_path,
)
from fisher_rao.geometry import GeodesicPath, ManifoldSpec
from fisher_rao.numerics.special import ln_gamma

__all__ = ["Categorical", "Multinomial"]

SIMPLEX_TOL = 1e-9
TANGENT_TOL = 1e-9


def _complete(x: FloatArray) -> FloatArray:
    """Append the last coordinate ``1 - sum(x)`` to chart rows."""
    return np.concatenate([x, 1.0 - np.sum(x, axis=-1, keepdims=True)], axis=-1)


class Multinomial(InformationManifold):
    """Multinomial distributions with ``k`` categories and ``n`` trials."""

    def __init__(self, k: int, n: int = 1, config: SolverConfig | None = None) -> None:
        if int(k) != k or k < 2:
            raise DomainError(f"multinomial needs k >= 2 categories, got {k!r}")
        if int(n) != n or n < 1:
            raise DomainError(f"multinomial n must be a positive integer, got {n!r}")
        self.k = int(k)
        self.n = int(n)
        super().__init__(config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"multinomial(k={self.k}, n={self.n})"

    # ── chart ───────────────────────────────────────────────────────────────

    def _build_spec(self) -> ManifoldSpec:
        n, d = float(self.n), self.k - 1

        def metric(x: FloatArray) -> FloatArray:
            last = 1.0 - np.sum(x, axis=-1)
            diag = np.eye(d) / x[..., None, :]
            return n * (diag + (1.0 / last)[..., None, None])

        def metric_derivative(x: FloatArray) -> FloatArray:
            last = 1.0 - np.sum(x, axis=-1)
            out = np.broadcast_to(
                (1.0 / last**2)[..., None, None, None], x.shape[:-1] + (d, d, d)
            ).copy()
            idx = np.arange(d)
            out[..., idx, idx, idx] -= 1.0 / x**2
            return n * out

        def to_sphere(x: FloatArray) -> FloatArray:
            return 2.0 * np.sqrt(n * np.clip(_complete(x), 0.0, None))

        def from_sphere(r: FloatArray) -> FloatArray:
            return (r[..., :-1] ** 2) / (4.0 * n)

        radius = 2.0 * np.sqrt(n)

        def angle(x: FloatArray, y: FloatArray) -> FloatArray:
            overlap = np.clip(_complete(x) * _complete(y), 0.0, None)
            c = np.sum(np.sqrt(overlap), axis=-1)
            return np.arccos(np.clip(c, -1.0, 1.0))

        def dist(x: FloatArray, y: FloatArray) -> FloatArray:
            return radius * angle(x, y)

        def pushforward(v: FloatArray, x: FloatArray) -> FloatArray:
            full = _complete(x)
            full_v = np.concatenate([v, -np.sum(v, axis=-1, keepdims=True)], axis=-1)
            return np.sqrt(n / full) * full_v

        def pullback(w: FloatArray, x: FloatArray) -> FloatArray:
            full = _complete(x)
            return (w * np.sqrt(full / n))[..., :-1]

        def exp(v: FloatArray, x: FloatArray) -> FloatArray:
            r = to_sphere(x)
            w = pushforward(v, x)
            speed = np.linalg.norm(w, axis=-1, keepdims=True)
            theta = speed / radius
            with np.errstate(invalid="ignore", divide="ignore"):
                direction = np.where(speed > 0, w / speed, 0.0)
            y = np.cos(theta) * r + np.sin(theta) * radius * direction
            # leaving the positive orthant means leaving the simplex
            y = np.where(np.all(y > 0, axis=-1, keepdims=True), y, np.nan)
            return from_sphere(y)

        def log(y: FloatArray, x: FloatArray) -> FloatArray:
            rx, ry = to_sphere(x), to_sphere(y)
            theta = angle(x, y)[..., None]
            tangential = ry - np.cos(theta) * rx
            size = np.linalg.norm(tangential, axis=-1, keepdims=True)
            with np.errstate(invalid="ignore", divide="ignore"):
                w = np.where(size > 0, tangential * (radius * theta / size), 0.0)
            return pullback(w, x)

        def belongs(x: FloatArray) -> Any:
            return 1.0 - np.sum(x, axis=-1) > 0.0

        self._to_sphere = to_sphere
        self._pushforward = pushforward
        return ManifoldSpec(
            name=self.name,
            dim=d,
            metric_matrix=metric,
            belongs=belongs,
            metric_derivative=metric_derivative,
            dist=dist,
            exp=exp,
            log=log,
            lower=(0.0,) * d,
            upper=(1.0,) * d,
            config=self.config,
        )

    def _full(
        self, point: Any, name: str = "point", *, closed: bool = False
    ) -> FloatArray:
        theta = as_array(point, name=name).reshape(-1)
        if theta.shape[0] != self.k:
            raise DimensionMismatchError(
                f"{name} must have {self.k} probabilities, got {theta.shape[0]}",
                expected=self.k,
                actual=theta.shape[0],
            )
        if abs(float(np.sum(theta)) - 1.0) > SIMPLEX_TOL:
            raise DomainError(f"{name} {theta.tolist()} does not sum to 1")
        if closed:
            if np.any(theta < 0):
                raise DomainError(f"{name} {theta.tolist()} has negative entries")
        elif np.any(theta <= 0):
            raise DomainError(f"{name} {theta.tolist()} is not in the open simplex")
        return theta

    def _chart(self, point: Any, name: str = "point") -> FloatArray:
        return self.spec.check_point(self._full(point, name)[:-1], name=name)

    def _unchart(self, x: FloatArray) -> FloatArray:
        return _complete(x)

    def _chart_tangent(self, u: Any, x: FloatArray) -> FloatArray:
        vec = as_array(u, name="tangent vector").reshape(-1)
        if vec.shape[0] == self.k - 1:
            return vec
        if vec.shape[0] != self.k:
            raise DimensionMismatchError(
                f"tangent vector must have {self.k} components, got {vec.shape[0]}",
                expected=self.k,
                actual=vec.shape[0],
            )
        if abs(float(np.sum(vec))) > TANGENT_TOL * max(1.0, float(np.max(np.abs(vec)))):
            raise TangencyError(
                f"tangent vector {vec.tolist()} does not sum to 0 "
                f"(sum {np.sum(vec):.3e})"
            )
        return vec[:-1]

    def _unchart_tangent(self, v: FloatArray, x: FloatArray) -> FloatArray:
        return np.concatenate([v, [-np.sum(v)]])

    def _unchart_path(self, path: GeodesicPath) -> GeodesicPath:
        def tangent(v: FloatArray, x: FloatArray) -> FloatArray:
            return np.concatenate([v, -np.sum(v, axis=-1, keepdims=True)], axis=-1)

        return map_path(path, _complete, tangent)

    def _chart_path(self, path: GeodesicPath) -> GeodesicPath:
        if path.points.shape[-1] == self.k - 1:
            return path
        return map_path(path, lambda x: x[..., :-1], lambda v, x: v[..., :-1])

    # ── closed forms ────────────────────────────────────────────────────────

    def sphere_map(self, point: Any) -> FloatArray:
        """Image ``2 sqrt(n theta)`` on the sphere of radius ``2 sqrt(n)``."""
        return 2.0 * np.sqrt(self.n * self._full(point, closed=True))

    def sphere_inverse(self, r: Any) -> FloatArray:
        arr = as_array(r, name="sphere point").reshape(-1)
        if np.any(arr <= 0):
            raise DomainError(f"sphere point {arr.tolist()} has nonpositive entries")
        return arr**2 / (4.0 * self.n)

    def dist(self, a: Any, b: Any) -> float:
        """``2 sqrt(n) arccos(sum sqrt(a_i b_i))``; simplex vertices are allowed."""
        x = self._full(a, "a", closed=True)
        y = self._full(b, "b", closed=True)
        c = float(np.sum(np.sqrt(x * y)))
        return float(2.0 * np.sqrt(self.n) * np.arccos(min(1.0, max(-1.0, c))))

    def interpolate(self, a: Any, b: Any, t: float) -> FloatArray:
        """Point at fraction ``t`` along the great-circle geodesic."""
        x = self._full(a, "a")
        y = self._full(b, "b")
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t must lie in [0, 1], got {t!r}")
        rx, ry = np.sqrt(x), np.sqrt(y)
        omega = float(np.arccos(min(1.0, float(rx @ ry))))
        assert omega < np.pi, "antipodal images cannot occur on the positive orthant"
        if omega == 0.0:
            return x.copy()
        r = (np.sin((1.0 - t) * omega) * rx + np.sin(t * omega) * ry) / np.sin(omega)
        theta = r * r
        return theta / theta.sum()

    def sphere_pushforward(self, u: Any, point: Any) -> FloatArray:
        """Differential of :meth:`sphere_map` applied to a tangent vector."""
        x = self._chart(point)
        return self._pushforward(self._chart_tangent(u, x), x)

    def sectional_curvature(
        self, point: Any = None, u: Any = None, v: Any = None
    ) -> float:
        """Constant ``1 / (4 n)``, the curvature of a sphere of radius ``2 sqrt(n)``."""
        if self.k < 3:
            raise UndefinedCurvatureError(
                f"{self.name} is one-dimensional; sectional curvature needs k >= 3"
            )
        if point is not None:
            self._chart(point)
        return 1.0 / (4.0 * self.n)

    # ── statistics ──────────────────────────────────────────────────────────

    def log_pmf(self, point: Any, counts: Any) -> float:
        theta = self._full(point)
        x = np.asarray(counts, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.k:
            raise DimensionMismatchError(
                f"counts must have {self.k} entries, got {x.shape[0]}",
                expected=self.k,
                actual=x.shape[0],
            )
        if np.any(x < 0) or np.any(np.floor(x) != x) or int(x.sum()) != self.n:
            raise DomainError(
                f"counts {x.tolist()} must be non-negative integers summing to {self.n}"
            )
        coeff = float(ln_gamma(self.n + 1.0)) - float(np.sum(ln_gamma(x + 1.0)))
        return coeff + float(np.sum(x * np.log(theta)))

    def pmf(self, point: Any, counts: Any) -> float:
        return float(np.exp(self.log_pmf(point, counts)))

    def pdf(self, point: Any) -> Callable[[Any], float]:
        theta = self._full(point)
        return lambda counts: self.pmf(theta, counts)

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        """``count`` vectors of category counts, each summing to ``n``."""
        theta = self._full(point)
        draws = as_generator(rng).multinomial(self.n, theta, size=check_count(count))
        return draws.astype(np.float64)

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        theta = rng.uniform(0.05, 1.0, size=self.k)
        return (theta / theta.sum())[:-1]


class Categorical(Multinomial):
    """Categorical distributions: the multinomial family with one trial."""

    def __init__(self, k: int, config: SolverConfig | None = None) -> None:
        super().__init__(k, 1, config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"categorical(k={self.k})"
