"""Base class shared by every parametric family."""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Any, Callable, Union

import numpy as np

from fisher_rao import geometry
from fisher_rao._config import SolverConfig, resolve_solver_config
from fisher_rao._types import FloatArray, as_point
from fisher_rao.exceptions import DomainError, UndefinedCurvatureError
from fisher_rao.geometry import GeodesicPath, ManifoldSpec

if TYPE_CHECKING:
    from fisher_rao.generic import DensityModel

RandomState = Union[np.random.Generator, int, None]


def as_generator(rng: RandomState) -> np.random.Generator:
    """Accept a Generator, a seed or ``None``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def check_count(count: int) -> int:
    count = int(count)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    return count


class InformationManifold:
    """A parametric family together with its Fisher-Rao geometry.

    Subclasses describe their chart by implementing :meth:`_build_spec`;
    every geometric operation then runs through the geometry engine, using
    whatever closed forms its ``ManifoldSpec`` declares. Families whose
    public points are not plain chart vectors (simplex points, covariance
    matrices) override the ``_chart`` / ``_unchart`` hooks.
    """

    name: str = "family"

    def __init__(self, config: SolverConfig | None = None) -> None:
        self._config = config if config is not None else resolve_solver_config()
        self._spec: ManifoldSpec | None = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, dim={self.dim})"

    # ── chart ───────────────────────────────────────────────────────────────

    @property
    def config(self) -> SolverConfig:
        return self._config

    @property
    def spec(self) -> ManifoldSpec:
        if self._spec is None:
            self._spec = self._build_spec()
        return self._spec

    @property
    def dim(self) -> int:
        return self.spec.dim

    def _build_spec(self) -> ManifoldSpec:
        raise NotImplementedError

    def _chart(self, point: Any, name: str = "point") -> FloatArray:
        return self.spec.check_point(point, name=name)

    def _unchart(self, x: FloatArray) -> Any:
        return x

    def _chart_tangent(self, u: Any, x: FloatArray) -> FloatArray:
        return as_point(u, self.dim, name="tangent vector")

    def _unchart_tangent(self, v: FloatArray, x: FloatArray) -> Any:
        return v

    def _unchart_path(self, path: GeodesicPath) -> GeodesicPath:
        return path

    def _chart_path(self, path: GeodesicPath) -> GeodesicPath:
        return path

    def to_coordinates(self, point: Any) -> FloatArray:
        """Chart coordinates of ``point`` (validated)."""
        return self._chart(point)

    def from_coordinates(self, x: FloatArray) -> Any:
        return self._unchart(self.spec.check_point(x))

    # ── geometry ────────────────────────────────────────────────────────────

    def belongs(self, point: Any) -> bool:
        try:
            self._chart(point)
        except (DomainError, ValueError):
            return False
        return True

    def metric_matrix(self, point: Any) -> FloatArray:
        """Fisher information matrix in chart coordinates."""
        return self.spec.metric_matrix(self._chart(point))

    def inner_product(self, u: Any, v: Any, point: Any) -> float:
        x = self._chart(point)
        return geometry.inner_product(
            self._chart_tangent(u, x), self._chart_tangent(v, x), x, self.spec
        )

    def norm(self, u: Any, point: Any) -> float:
        return float(np.sqrt(max(self.inner_product(u, u, point), 0.0)))

    def christoffels(self, point: Any) -> FloatArray:
        return geometry.christoffels(self.spec, self._chart(point))

    def exp(self, v: Any, point: Any) -> Any:
        x = self._chart(point, name="base point")
        return self._unchart(geometry.exp(self._chart_tangent(v, x), x, self.spec))

    def log(self, target: Any, point: Any) -> Any:
        x = self._chart(point, name="base point")
        y = self._chart(target, name="target point")
        return self._unchart_tangent(geometry.log(y, x, self.spec), x)

    def dist(self, a: Any, b: Any) -> float:
        x, y = self._chart(a, name="a"), self._chart(b, name="b")
        return geometry.dist(x, y, self.spec)

    def geodesic(
        self,
        start: Any,
        end_or_tangent: Any,
        n_samples: int | None = None,
        *,
        tangent: bool = False,
    ) -> GeodesicPath:
        """Sampled geodesic from ``start`` to an end point or along a velocity."""
        x = self._chart(start, name="start point")
        other = (
            self._chart_tangent(end_or_tangent, x)
            if tangent
            else self._chart(end_or_tangent, name="end point")
        )
        path = geometry.geodesic(x, other, self.spec, n_samples, tangent=tangent)
        return self._unchart_path(path)

    def geodesic_sphere(
        self, center: Any, radius: float, n_rays: int = 16, n_samples: int | None = None
    ) -> list[GeodesicPath]:
        rays = geometry.geodesic_sphere(
            self._chart(center, name="center"), radius, self.spec, n_rays, n_samples
        )
        return [self._unchart_path(ray) for ray in rays]

    def parallel_transport(self, u: Any, path: GeodesicPath) -> Any:
        """Transport ``u`` (based at the path start) to the path end."""
        chart_path = self._chart_path(path)
        x0 = chart_path.points[0]
        out = geometry.parallel_transport(
            self._chart_tangent(u, x0), chart_path, self.spec
        )
        return self._unchart_tangent(out, chart_path.points[-1])

    def _default_plane(self, x: FloatArray) -> tuple[FloatArray, FloatArray]:
        if self.dim < 2:
            raise UndefinedCurvatureError(
                f"sectional curvature needs a 2-plane; {self.name} is one-dimensional"
            )
        eye = np.eye(self.dim)
        return eye[0], eye[1]

    def numeric_sectional_curvature(
        self, point: Any, u: Any = None, v: Any = None
    ) -> float:
        """Sectional curvature from the numeric Riemann tensor."""
        x = self._chart(point)
        if u is None or v is None:
            cu, cv = self._default_plane(x)
        else:
            cu, cv = self._chart_tangent(u, x), self._chart_tangent(v, x)
        return geometry.sectional_curvature(cu, cv, x, self.spec)

    def sectional_curvature(self, point: Any, u: Any = None, v: Any = None) -> float:
        """Sectional curvature at ``point``; the plane defaults to the first axes."""
        return self.numeric_sectional_curvature(point, u, v)

    # ── statistics ──────────────────────────────────────────────────────────

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        raise NotImplementedError

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> Any:
        raise NotImplementedError

    def random_point(self, rng: RandomState = None, count: int | None = None) -> Any:
        """Interior parameters drawn uniformly from a family-specific box."""
        gen = as_generator(rng)
        n = 1 if count is None else check_count(count)
        rows = [self._unchart(self._random_chart_point(gen)) for _ in range(n)]
        return rows[0] if count is None else rows

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        raise NotImplementedError

    def density_model(self) -> DensityModel:
        raise NotImplementedError(f"{self.name} has no one-dimensional density model")

    def with_config(self, config: SolverConfig) -> InformationManifold:
        clone = type(self).__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone._config = config
        clone._spec = None if self._spec is None else self._spec.with_config(config)
        return clone


def map_path(
    path: GeodesicPath,
    points: Callable[[FloatArray], FloatArray],
    velocities: Callable[[FloatArray, FloatArray], FloatArray],
) -> GeodesicPath:
    """Express a chart path through row-wise point and velocity maps."""
    return dataclasses.replace(
        path,
        points=points(path.points),
        velocities=velocities(path.velocities, path.points),
    )
