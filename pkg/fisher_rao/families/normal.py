"""Normal families: univariate, diagonal multivariate and fixed-mean multivariate.

Univariate points are ``(m, sigma)``. After the change of variables
``u = m / sqrt(2)`` the metric is twice the Poincare half-plane metric, so
the family is a hyperbolic plane of curvature ``-1/2``. Exponential and
logarithm maps are evaluated on the hyperboloid model of that plane.

The diagonal family is the Riemannian product of univariate factors with
interleaved coordinates ``(m_1, sigma_1, ..., m_p, sigma_p)``.

The fixed-mean family carries half the affine-invariant metric on SPD
matrices, ``g(U, V) = tr(S^-1 U S^-1 V) / 2``, charted by the lower
triangle of the covariance read row by row.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Callable

import numpy as np

from fisher_rao._config import SolverConfig
from fisher_rao._types import FloatArray, as_array, as_point
from fisher_rao.exceptions import DimensionMismatchError, DomainError
from fisher_rao.families._base import (
    InformationManifold,
    RandomState,
    as_generator,
    check_count,
)
from fisher_rao.geometry import ManifoldSpec

if TYPE_CHECKING:
    from fisher_rao.generic import DensityModel

__all__ = [
    "CenteredNormal",
    "DiagonalNormal",
    "Normal",
    "halfplane_dist",
    "legacy_halfplane_dist",
]

_SQRT2 = np.sqrt(2.0)
_LOG_2PI = np.log(2.0 * np.pi)


# ── univariate closed forms (vectorized over leading axes) ───────────────────


def _halfplane_arg(dm2: FloatArray, s1: FloatArray, s2: FloatArray) -> FloatArray:
    """``2 asinh(sqrt(dm2 + ds^2) / (2 sqrt(s1 s2)))`` = ``acosh(1 + ...)``."""
    return 2.0 * np.arcsinh(np.sqrt(dm2 + (s1 - s2) ** 2) / (2.0 * np.sqrt(s1 * s2)))


def halfplane_dist(x: FloatArray, y: FloatArray) -> FloatArray:
    """Fisher-Rao distance between univariate normals ``(m, sigma)``.

    ``sqrt(2) acosh((dm^2 / 2 + s1^2 + s2^2) / (2 s1 s2))``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dm = x[..., 0] - y[..., 0]
    return _SQRT2 * _halfplane_arg(0.5 * dm * dm, x[..., 1], y[..., 1])


def legacy_halfplane_dist(x: FloatArray, y: FloatArray) -> FloatArray:
    """Plain Poincare half-plane distance on raw ``(m, sigma)``.

    ``acosh(1 + (dm^2 + ds^2) / (2 s1 s2))``. This is not the Fisher-Rao
    distance of the normal family; it is kept for comparison with values
    computed by that formula.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dm = x[..., 0] - y[..., 0]
    return _halfplane_arg(dm * dm, x[..., 1], y[..., 1])


def _lorentz(a: FloatArray, b: FloatArray) -> FloatArray:
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def _to_hyperboloid(x: FloatArray) -> FloatArray:
    u, s = x[..., 0] / _SQRT2, x[..., 1]
    r2 = u * u + s * s
    return np.stack([(r2 + 1.0) / (2.0 * s), (r2 - 1.0) / (2.0 * s), u / s], axis=-1)


def _from_hyperboloid(h: FloatArray) -> FloatArray:
    s = 1.0 / (h[..., 0] - h[..., 1])
    return np.stack([_SQRT2 * h[..., 2] * s, s], axis=-1)


def _push(v: FloatArray, x: FloatArray) -> FloatArray:
    """Differential of the hyperboloid map at ``x``."""
    u, s = x[..., 0] / _SQRT2, x[..., 1]
    du, ds = v[..., 0] / _SQRT2, v[..., 1]
    s2 = s * s
    return np.stack(
        [
            u / s * du + (s2 - u * u - 1.0) / (2.0 * s2) * ds,
            u / s * du + (s2 - u * u + 1.0) / (2.0 * s2) * ds,
            du / s - u / s2 * ds,
        ],
        axis=-1,
    )


def _pull(w: FloatArray, x: FloatArray) -> FloatArray:
    u, s = x[..., 0] / _SQRT2, x[..., 1]
    ds = -s * s * (w[..., 0] - w[..., 1])
    du = s * w[..., 2] + u / s * ds
    return np.stack([_SQRT2 * du, ds], axis=-1)


def _normal_exp(v: FloatArray, x: FloatArray) -> FloatArray:
    h = _to_hyperboloid(x)
    w = _push(v, x)
    size = np.sqrt(np.maximum(_lorentz(w, w), 0.0))[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = np.where(size > 0, w / size, 0.0)
    return _from_hyperboloid(np.cosh(size) * h + np.sinh(size) * scaled)


def _normal_log(y: FloatArray, x: FloatArray) -> FloatArray:
    hx, hy = _to_hyperboloid(x), _to_hyperboloid(y)
    c = np.maximum(-_lorentz(hx, hy), 1.0)[..., None]
    theta = np.arccosh(c)
    direction = hy - c * hx
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.where(theta > 0, theta / np.sinh(theta), 1.0)
    return _pull(factor * direction, x)


def _normal_metric(x: FloatArray) -> FloatArray:
    inv = 1.0 / x[..., 1] ** 2
    out = np.zeros(x.shape[:-1] + (2, 2))
    out[..., 0, 0] = inv
    out[..., 1, 1] = 2.0 * inv
    return out


def _normal_christoffels(x: FloatArray) -> FloatArray:
    s = x[..., 1]
    out = np.zeros(x.shape[:-1] + (2, 2, 2))
    out[..., 0, 0, 1] = out[..., 0, 1, 0] = -1.0 / s
    out[..., 1, 0, 0] = 0.5 / s
    out[..., 1, 1, 1] = -1.0 / s
    return out


def _normal_log_pdf(xs: FloatArray, m: float, s: float) -> FloatArray:
    z = (xs - m) / s
    return -0.5 * z * z - np.log(s) - 0.5 * _LOG_2PI


class Normal(InformationManifold):
    """Univariate normal family in ``(m, sigma)`` coordinates."""

    name = "normal"

    def _build_spec(self) -> ManifoldSpec:
        def metric_derivative(x: FloatArray) -> FloatArray:
            s = x[..., 1]
            out = np.zeros(x.shape[:-1] + (2, 2, 2))
            out[..., 0, 0, 1] = -2.0 / s**3
            out[..., 1, 1, 1] = -4.0 / s**3
            return out

        return ManifoldSpec(
            name=self.name,
            dim=2,
            metric_matrix=_normal_metric,
            metric_derivative=metric_derivative,
            christoffels=_normal_christoffels,
            dist=halfplane_dist,
            exp=_normal_exp,
            log=_normal_log,
            lower=(-np.inf, 0.0),
            upper=(np.inf, np.inf),
            config=self.config,
        )

    def legacy_halfplane_dist(self, a: Any, b: Any) -> float:
        return float(legacy_halfplane_dist(self._chart(a, "a"), self._chart(b, "b")))

    def interpolate(self, a: Any, b: Any, t: float) -> FloatArray:
        """Point at fraction ``t`` along the geodesic from ``a`` to ``b``."""
        x, y = self._chart(a, "a"), self._chart(b, "b")
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t must lie in [0, 1], got {t!r}")
        if t == 1.0:
            return y.copy()
        return _normal_exp(t * _normal_log(y, x), x)

    def sectional_curvature(
        self, point: Any = None, u: Any = None, v: Any = None
    ) -> float:
        """Constant ``-1/2``."""
        if point is not None:
            self._chart(point)
        return -0.5

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        m, s = self._chart(point)

        def density(xs: Any) -> Any:
            out = np.exp(_normal_log_pdf(np.asarray(xs, dtype=np.float64), m, s))
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        m, s = self._chart(point)
        return as_generator(rng).normal(m, s, size=check_count(count))

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        return np.array([rng.uniform(-3.0, 3.0), rng.uniform(0.3, 3.0)])

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import normal_model

        return normal_model()


class DiagonalNormal(InformationManifold):
    """``p``-variate normals with diagonal covariance ``diag(sigma_i^2)``.

    The metric is the product of univariate metrics, so the distance is
    ``sqrt(sum d_i^2)`` and exp/log act factor by factor.
    """

    def __init__(self, p: int, config: SolverConfig | None = None) -> None:
        if int(p) != p or p < 1:
            raise DomainError(f"dimension must be a positive integer, got {p!r}")
        self.p = int(p)
        super().__init__(config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"normal-diagonal(p={self.p})"

    def _pairs(self, x: FloatArray) -> FloatArray:
        return x.reshape(x.shape[:-1] + (self.p, 2))

    def _flat(self, x: FloatArray) -> FloatArray:
        return x.reshape(x.shape[:-2] + (2 * self.p,))

    def _build_spec(self) -> ManifoldSpec:
        p, d = self.p, 2 * self.p

        def metric(x: FloatArray) -> FloatArray:
            blocks = _normal_metric(self._pairs(x))
            out = np.zeros(x.shape[:-1] + (d, d))
            for i in range(p):
                out[..., 2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blocks[..., i, :, :]
            return out

        def christoffels(x: FloatArray) -> FloatArray:
            blocks = _normal_christoffels(self._pairs(x))
            out = np.zeros(x.shape[:-1] + (d, d, d))
            for i in range(p):
                sl = slice(2 * i, 2 * i + 2)
                out[..., sl, sl, sl] = blocks[..., i, :, :, :]
            return out

        def dist(x: FloatArray, y: FloatArray) -> FloatArray:
            parts = halfplane_dist(self._pairs(x), self._pairs(y))
            return np.sqrt(np.sum(parts * parts, axis=-1))

        return ManifoldSpec(
            name=self.name,
            dim=d,
            metric_matrix=metric,
            christoffels=christoffels,
            dist=dist,
            exp=lambda v, x: self._flat(_normal_exp(self._pairs(v), self._pairs(x))),
            log=lambda y, x: self._flat(_normal_log(self._pairs(y), self._pairs(x))),
            lower=(-np.inf, 0.0) * p,
            upper=(np.inf, np.inf) * p,
            config=self.config,
        )

    def component_distances(self, a: Any, b: Any) -> FloatArray:
        """Univariate distances of the ``p`` factors."""
        left = self._pairs(self._chart(a, "a"))
        return halfplane_dist(left, self._pairs(self._chart(b, "b")))

    def sectional_curvature(self, point: Any, u: Any = None, v: Any = None) -> float:
        """``-1/2`` inside one factor, ``0`` across factors; numeric otherwise."""
        if u is None and v is None:
            self._chart(point)
            return -0.5
        return self.numeric_sectional_curvature(point, u, v)

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        pairs = self._pairs(self._chart(point))
        m, s = pairs[:, 0], pairs[:, 1]

        def density(xs: Any) -> Any:
            arr = np.asarray(xs, dtype=np.float64)
            if arr.shape[-1] != self.p:
                raise DimensionMismatchError(
                    f"observations must have {self.p} coordinates, got {arr.shape}",
                    expected=self.p,
                    actual=arr.shape[-1],
                )
            out = np.exp(np.sum(_normal_log_pdf(arr, m, s), axis=-1))
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        pairs = self._pairs(self._chart(point))
        n = check_count(count)
        return as_generator(rng).normal(pairs[:, 0], pairs[:, 1], size=(n, self.p))

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        pairs = np.stack(
            [rng.uniform(-3.0, 3.0, self.p), rng.uniform(0.3, 3.0, self.p)], axis=-1
        )
        return pairs.reshape(-1)


# ── fixed-mean multivariate ──────────────────────────────────────────────────


def _sym_apply(s: FloatArray, fn: Callable[[FloatArray], FloatArray]) -> FloatArray:
    w, q = np.linalg.eigh(s)
    return np.einsum("...ij,...j,...kj->...ik", q, fn(w), q)


class CenteredNormal(InformationManifold):
    """``p``-variate normals with a fixed mean and free covariance ``S``.

    Chart coordinates are the lower-triangular entries of ``S`` read row by
    row (``S_00, S_10, S_11, S_20, ...``). The mean is stored for densities
    and sampling only; it plays no role in the geometry.
    """

    def __init__(
        self,
        p: int,
        mean: Any = None,
        config: SolverConfig | None = None,
    ) -> None:
        if int(p) != p or p < 1:
            raise DomainError(f"dimension must be a positive integer, got {p!r}")
        self.p = int(p)
        self.mean = np.zeros(self.p)
        if mean is not None:
            self.mean = as_point(mean, self.p, name="mean")
        rows, cols = np.tril_indices(self.p)
        self._rows, self._cols = rows, cols
        basis = np.zeros((len(rows), self.p, self.p))
        basis[np.arange(len(rows)), rows, cols] = 1.0
        basis[np.arange(len(rows)), cols, rows] = 1.0
        self._basis = basis
        super().__init__(config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"normal-centered(p={self.p})"

    # ── vech chart ──────────────────────────────────────────────────────────

    def vech(self, s: FloatArray) -> FloatArray:
        return np.asarray(s)[..., self._rows, self._cols]

    def unvech(self, x: FloatArray) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros(x.shape[:-1] + (self.p, self.p))
        out[..., self._rows, self._cols] = x
        out[..., self._cols, self._rows] = x
        return out

    def _build_spec(self) -> ManifoldSpec:
        d = len(self._rows)
        basis = self._basis

        def metric(x: FloatArray) -> FloatArray:
            inv = np.linalg.inv(self.unvech(x))
            left = np.einsum("...ij,ajk->...aik", inv, basis)
            return 0.5 * np.einsum("...aik,...bki->...ab", left, left)

        def belongs(x: FloatArray) -> Any:
            return np.linalg.eigvalsh(self.unvech(x))[..., 0] > 0.0

        def acceleration(x: FloatArray, v: FloatArray) -> FloatArray:
            s, dv = self.unvech(x), self.unvech(v)
            return self.vech(dv @ np.linalg.solve(s, dv))

        def exp(v: FloatArray, x: FloatArray) -> FloatArray:
            s = self.unvech(x)
            root = _sym_apply(s, np.sqrt)
            inv_root = _sym_apply(s, lambda w: 1.0 / np.sqrt(w))
            inner = _sym_apply(inv_root @ self.unvech(v) @ inv_root, np.exp)
            return self.vech(root @ inner @ root)

        def log(y: FloatArray, x: FloatArray) -> FloatArray:
            s = self.unvech(x)
            root = _sym_apply(s, np.sqrt)
            inv_root = _sym_apply(s, lambda w: 1.0 / np.sqrt(w))
            inner = _sym_apply(inv_root @ self.unvech(y) @ inv_root, np.log)
            return self.vech(root @ inner @ root)

        def dist(x: FloatArray, y: FloatArray) -> FloatArray:
            chol = np.linalg.cholesky(self.unvech(x))
            half = np.linalg.solve(chol, self.unvech(y)).swapaxes(-1, -2)
            whitened = np.linalg.solve(chol, half)
            lam = np.linalg.eigvalsh(0.5 * (whitened + whitened.swapaxes(-1, -2)))
            return np.sqrt(0.5 * np.sum(np.log(lam) ** 2, axis=-1))

        diag_lower = tuple(
            0.0 if r == c else -np.inf for r, c in zip(self._rows, self._cols)
        )
        return ManifoldSpec(
            name=self.name,
            dim=d,
            metric_matrix=metric,
            belongs=belongs,
            acceleration=acceleration,
            dist=dist,
            exp=exp,
            log=log,
            lower=diag_lower,
            upper=(np.inf,) * d,
            config=self.config,
        )

    def _matrix(self, point: Any, name: str = "point") -> FloatArray:
        arr = as_array(point, name=name)
        d = len(self._rows)
        if arr.shape == (self.p, self.p):
            s = arr
        elif arr.ndim == 1 and arr.size == self.p * self.p:
            s = arr.reshape(self.p, self.p)
        elif arr.ndim == 1 and arr.size == d:
            return self.unvech(arr)
        else:
            raise DimensionMismatchError(
                f"{name} must be a {self.p}x{self.p} matrix, got shape {arr.shape}",
                expected=self.p * self.p,
                actual=arr.size,
            )
        atol = 1e-10 * max(1.0, float(np.max(np.abs(s))))
        if not np.allclose(s, s.T, rtol=0.0, atol=atol):
            raise DomainError(f"{name} is not symmetric: {s.tolist()}")
        return 0.5 * (s + s.T)

    def _chart(self, point: Any, name: str = "point") -> FloatArray:
        return self.spec.check_point(self.vech(self._matrix(point, name)), name=name)

    def _unchart(self, x: FloatArray) -> FloatArray:
        return self.unvech(x)

    def _chart_tangent(self, u: Any, x: FloatArray) -> FloatArray:
        return self.vech(self._matrix(u, "tangent vector"))

    def _unchart_tangent(self, v: FloatArray, x: FloatArray) -> FloatArray:
        return self.unvech(v)

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        s = self._unchart(self._chart(point))
        chol = np.linalg.cholesky(s)
        logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
        mean = self.mean

        def density(xs: Any) -> Any:
            arr = np.asarray(xs, dtype=np.float64)
            if arr.shape[-1] != self.p:
                raise DimensionMismatchError(
                    f"observations must have {self.p} coordinates, got {arr.shape}",
                    expected=self.p,
                    actual=arr.shape[-1],
                )
            z = np.linalg.solve(chol, (arr - mean)[..., None])[..., 0]
            log_norm = 0.5 * logdet + 0.5 * self.p * _LOG_2PI
            out = np.exp(-0.5 * np.sum(z * z, axis=-1) - log_norm)
            return float(out) if np.ndim(out) == 0 else out

        return density

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        chol = np.linalg.cholesky(self._unchart(self._chart(point)))
        z = as_generator(rng).standard_normal((check_count(count), self.p))
        return self.mean + z @ chol.T

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        a = rng.normal(scale=0.7, size=(self.p, self.p))
        return self.vech(a @ a.T + 0.5 * np.eye(self.p))
