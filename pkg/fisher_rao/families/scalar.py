"""One-parameter families: Poisson, exponential, binomial, Bernoulli, geometric.

Every family here has an arclength coordinate ``phi`` in which the Fisher
metric is Euclidean, so ``d(a, b) = |phi(a) - phi(b)|`` and geodesics are
the preimages of straight lines. All geometric closed forms follow from
``phi`` and the Fisher information ``I``:

    exp_x(v) = phi^-1(phi(x) + sqrt(I(x)) v)
    log_x(y) = (phi(y) - phi(x)) / sqrt(I(x))
    Gamma(x) = I'(x) / (2 I(x))
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Callable

import numpy as np

from fisher_rao._types import FloatArray, as_array
from fisher_rao.exceptions import (
    DomainError,
    FamilyMismatchError,
    InfiniteDistanceError,
)
from fisher_rao.families._base import (
    InformationManifold,
    RandomState,
    as_generator,
    check_count,
)
from fisher_rao.geometry import ManifoldSpec
from fisher_rao.numerics.special import ln_gamma

if TYPE_CHECKING:
    from fisher_rao.generic import DensityModel

__all__ = [
    "Bernoulli",
    "Binomial",
    "Exponential",
    "Geometric",
    "Poisson",
    "ScalarFamily",
]


def _scalar(x: Any, name: str = "parameter") -> float:
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size != 1:
        raise DomainError(f"{name} must be a single number, got {arr.tolist()}")
    return float(arr[0])


class ScalarFamily(InformationManifold):
    """A family with one real parameter on an open interval.

    Public points are plain floats; the chart is the parameter itself.
    """

    lower: float = 0.0
    upper: float = np.inf
    # interval on which phi stays finite, used by the distance formula
    closed_lower: bool = False
    closed_upper: bool = False
    # box used by random_point
    random_range: tuple[float, float] = (0.1, 10.0)

    # ── family-specific pieces ──────────────────────────────────────────────

    def fisher_information(self, theta: Any) -> Any:
        raise NotImplementedError

    def _log_information_slope(self, theta: FloatArray) -> FloatArray:
        """``d/dtheta log I(theta)``."""
        raise NotImplementedError

    def _phi(self, theta: FloatArray) -> FloatArray:
        raise NotImplementedError

    def _phi_inv(self, s: FloatArray) -> FloatArray:
        raise NotImplementedError

    def _phi_range(self) -> tuple[float, float]:
        raise NotImplementedError

    def _log_density(self, k: FloatArray, theta: float) -> FloatArray:
        raise NotImplementedError

    def _in_support(self, k: FloatArray) -> Any:
        raise NotImplementedError

    def _draw(self, rng: np.random.Generator, theta: float, count: int) -> FloatArray:
        raise NotImplementedError

    # ── chart ───────────────────────────────────────────────────────────────

    def _unchart(self, x: FloatArray) -> float:
        return float(x[0])

    def _unchart_tangent(self, v: FloatArray, x: FloatArray) -> float:
        return float(v[0])

    def _build_spec(self) -> ManifoldSpec:
        lo, hi = self._phi_range()

        def metric(x: FloatArray) -> FloatArray:
            return np.asarray(self.fisher_information(x), dtype=np.float64)[..., None]

        def metric_derivative(x: FloatArray) -> FloatArray:
            info = self.fisher_information(x[..., 0])
            slope = self._log_information_slope(x[..., 0])
            return (info * slope)[..., None, None, None]

        def christoffels(x: FloatArray) -> FloatArray:
            return 0.5 * self._log_information_slope(x[..., 0])[..., None, None, None]

        def exp(v: FloatArray, x: FloatArray) -> FloatArray:
            s = self._phi(x) + np.sqrt(self.fisher_information(x)) * v
            inside = (s > lo) & (s < hi)
            safe = np.where(inside, s, self._phi(x))
            return np.where(inside, self._phi_inv(safe), np.nan)

        def log(y: FloatArray, x: FloatArray) -> FloatArray:
            return (self._phi(y) - self._phi(x)) / np.sqrt(self.fisher_information(x))

        def dist(x: FloatArray, y: FloatArray) -> FloatArray:
            return np.abs(self._phi(y[..., 0]) - self._phi(x[..., 0]))

        return ManifoldSpec(
            name=self.name,
            dim=1,
            metric_matrix=metric,
            metric_derivative=metric_derivative,
            christoffels=christoffels,
            dist=dist,
            exp=exp,
            log=log,
            lower=(self.lower,),
            upper=(self.upper,),
            config=self.config,
        )

    # ── closed forms ────────────────────────────────────────────────────────

    def _check_closed(self, theta: Any, name: str) -> float:
        value = _scalar(theta, name)
        below = value < self.lower or (value == self.lower and not self.closed_lower)
        above = value > self.upper or (value == self.upper and not self.closed_upper)
        if value == self.lower and not self.closed_lower and self.lower > -np.inf:
            raise InfiniteDistanceError(
                f"{self.name} distance diverges at {name}={value!r}"
            )
        if value == self.upper and not self.closed_upper and self.upper < np.inf:
            raise InfiniteDistanceError(
                f"{self.name} distance diverges at {name}={value!r}"
            )
        if below or above or not np.isfinite(value):
            raise DomainError(
                f"{name}={value!r} is outside the {self.name} parameter range"
            )
        return value

    def arclength_coord(self, theta: Any) -> Any:
        """Coordinate ``phi`` in which the metric is Euclidean."""
        arr = as_array(theta, name="parameter")
        out = self._phi(arr)
        return float(out) if np.ndim(out) == 0 else out

    def arclength_inverse(self, s: Any) -> Any:
        """Inverse of :meth:`arclength_coord` on its range."""
        arr = as_array(s, name="arclength coordinate")
        lo, hi = self._phi_range()
        if np.any(arr < lo) or np.any(arr > hi):
            raise DomainError(
                f"arclength coordinate {arr.tolist()} outside [{lo!r}, {hi!r}]"
            )
        out = self._phi_inv(arr)
        return float(out) if np.ndim(out) == 0 else out

    def dist(self, a: Any, b: Any) -> float:
        """``|phi(a) - phi(b)|``; endpoints with finite ``phi`` are allowed."""
        if isinstance(b, ScalarFamily) or isinstance(a, ScalarFamily):
            raise FamilyMismatchError("dist takes parameter values, not families")
        x = self._check_closed(a, "a")
        y = self._check_closed(b, "b")
        return float(abs(self._phi(np.float64(x)) - self._phi(np.float64(y))))

    def interpolate(self, a: Any, b: Any, t: float) -> float:
        """Point at fraction ``t`` along the geodesic from ``a`` to ``b``."""
        x = self._check_closed(a, "a")
        y = self._check_closed(b, "b")
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t must lie in [0, 1], got {t!r}")
        if t == 0.0:
            return x
        if t == 1.0:
            return y
        s = (1.0 - t) * self._phi(np.float64(x)) + t * self._phi(np.float64(y))
        return float(self._phi_inv(s))

    # ── statistics ──────────────────────────────────────────────────────────

    def density(self, theta: Any, k: Any) -> Any:
        """Probability (or density) of ``k`` under parameter ``theta``."""
        value = self._chart(theta)[0]
        arr = np.asarray(k, dtype=np.float64)
        if not np.all(self._in_support(arr)):
            raise DomainError(f"{arr.tolist()} is outside the {self.name} sample space")
        out = np.exp(self._log_density(arr, value))
        return float(out) if np.ndim(out) == 0 else out

    def pdf(self, point: Any) -> Callable[[Any], Any]:
        value = self._chart(point)
        return lambda k: self.density(value, k)

    def sample(self, point: Any, count: int = 1, rng: RandomState = None) -> FloatArray:
        value = self._chart(point)[0]
        return self._draw(as_generator(rng), value, check_count(count))

    def _random_chart_point(self, rng: np.random.Generator) -> FloatArray:
        lo, hi = self.random_range
        return np.array([rng.uniform(lo, hi)])


def _is_integer(k: FloatArray) -> Any:
    return np.isfinite(k) & (np.floor(k) == k)


class Poisson(ScalarFamily):
    """Poisson family, parameter the mean ``lambda``."""

    name = "poisson"
    closed_lower = True

    def fisher_information(self, theta: Any) -> Any:
        return 1.0 / np.asarray(theta, dtype=np.float64)

    def _log_information_slope(self, theta: FloatArray) -> FloatArray:
        return -1.0 / theta

    def _phi(self, theta: FloatArray) -> FloatArray:
        return 2.0 * np.sqrt(theta)

    def _phi_inv(self, s: FloatArray) -> FloatArray:
        return 0.25 * np.asarray(s) ** 2

    def _phi_range(self) -> tuple[float, float]:
        return 0.0, np.inf

    def _in_support(self, k: FloatArray) -> Any:
        return _is_integer(k) & (k >= 0)

    def _log_density(self, k: FloatArray, theta: float) -> FloatArray:
        return k * np.log(theta) - theta - ln_gamma(k + 1.0)

    def _draw(self, rng: np.random.Generator, theta: float, count: int) -> FloatArray:
        return rng.poisson(theta, size=count).astype(np.float64)

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import poisson_model

        return poisson_model()


class Exponential(ScalarFamily):
    """Exponential family, parameter the rate ``lambda`` (mean ``1/lambda``)."""

    name = "exponential"

    def fisher_information(self, theta: Any) -> Any:
        return 1.0 / np.asarray(theta, dtype=np.float64) ** 2

    def _log_information_slope(self, theta: FloatArray) -> FloatArray:
        return -2.0 / theta

    def _phi(self, theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore"):
            return np.log(theta)

    def _phi_inv(self, s: FloatArray) -> FloatArray:
        return np.exp(s)

    def _phi_range(self) -> tuple[float, float]:
        return -np.inf, np.inf

    def _in_support(self, k: FloatArray) -> Any:
        return np.isfinite(k) & (k >= 0)

    def _log_density(self, k: FloatArray, theta: float) -> FloatArray:
        return np.log(theta) - theta * k

    def _draw(self, rng: np.random.Generator, theta: float, count: int) -> FloatArray:
        return rng.exponential(1.0 / theta, size=count)

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import exponential_model

        return exponential_model()


class Binomial(ScalarFamily):
    """Binomial family with a fixed number of trials ``n``, parameter ``p``."""

    upper = 1.0
    closed_lower = True
    closed_upper = True
    random_range = (0.05, 0.95)

    def __init__(self, n: int, config=None) -> None:
        if int(n) != n or n < 1:
            raise DomainError(f"binomial n must be a positive integer, got {n!r}")
        self.n = int(n)
        super().__init__(config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"binomial(n={self.n})"

    def fisher_information(self, theta: Any) -> Any:
        p = np.asarray(theta, dtype=np.float64)
        return self.n / (p * (1.0 - p))

    def _log_information_slope(self, theta: FloatArray) -> FloatArray:
        return -1.0 / theta + 1.0 / (1.0 - theta)

    def _phi(self, theta: FloatArray) -> FloatArray:
        return 2.0 * np.sqrt(self.n) * np.arcsin(np.sqrt(theta))

    def _phi_inv(self, s: FloatArray) -> FloatArray:
        return np.sin(np.asarray(s) / (2.0 * np.sqrt(self.n))) ** 2

    def _phi_range(self) -> tuple[float, float]:
        return 0.0, float(np.pi * np.sqrt(self.n))

    def _in_support(self, k: FloatArray) -> Any:
        return _is_integer(k) & (k >= 0) & (k <= self.n)

    def _log_density(self, k: FloatArray, theta: float) -> FloatArray:
        coeff = ln_gamma(self.n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(self.n - k + 1.0)
        return coeff + k * np.log(theta) + (self.n - k) * np.log1p(-theta)

    def _draw(self, rng: np.random.Generator, theta: float, count: int) -> FloatArray:
        return rng.binomial(self.n, theta, size=count).astype(np.float64)

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import binomial_model

        return binomial_model(self.n)


class Bernoulli(Binomial):
    """Bernoulli family: the binomial family with one trial."""

    def __init__(self, config=None) -> None:
        super().__init__(1, config)

    @property
    def name(self) -> str:  # type: ignore[override]
        return "bernoulli"

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import bernoulli_model

        return bernoulli_model()


class Geometric(ScalarFamily):
    """Geometric family on ``{1, 2, ...}``: ``P(k) = (1 - p)^(k - 1) p``.

    ``phi(p) = -2 atanh(sqrt(1 - p))`` diverges as ``p -> 0``, so distances
    to ``p = 0`` are infinite; ``p = 1`` is at finite distance.
    """

    name = "geometric"
    upper = 1.0
    closed_upper = True
    random_range = (0.05, 0.95)

    def fisher_information(self, theta: Any) -> Any:
        p = np.asarray(theta, dtype=np.float64)
        return 1.0 / (p * p * (1.0 - p))

    def _log_information_slope(self, theta: FloatArray) -> FloatArray:
        return -2.0 / theta + 1.0 / (1.0 - theta)

    def _phi(self, theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore"):
            return -2.0 * np.arctanh(np.sqrt(1.0 - np.asarray(theta)))

    def _phi_inv(self, s: FloatArray) -> FloatArray:
        root = np.tanh(-0.5 * np.asarray(s))
        return 1.0 - root * root

    def _phi_range(self) -> tuple[float, float]:
        return -np.inf, 0.0

    def _in_support(self, k: FloatArray) -> Any:
        return _is_integer(k) & (k >= 1)

    def _log_density(self, k: FloatArray, theta: float) -> FloatArray:
        return (k - 1.0) * np.log1p(-theta) + np.log(theta)

    def _draw(self, rng: np.random.Generator, theta: float, count: int) -> FloatArray:
        return rng.geometric(theta, size=count).astype(np.float64)

    def density_model(self) -> DensityModel:
        from fisher_rao.generic import geometric_model

        return geometric_model()
