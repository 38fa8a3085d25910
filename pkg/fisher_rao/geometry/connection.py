"""Levi-Civita connection: Christoffel symbols, geodesics, exp/log, transport.

Closed forms declared on the :class:`ManifoldSpec` always win; everything
else is computed from the metric. Geodesics solve

    x'' + Gamma(x)(x', x') = 0

as a first-order system in (x, v) with the batched Dormand-Prince
integrator, so exp and the shooting Jacobians for many pairs share a
single integration.

The logarithm is found by Newton shooting on ``exp_x(v) - y``: the first
guess is the coordinate difference, Jacobians come from forward differences
of exp, and each Newton step is halved until the residual decreases. Rows
that stall are retried by continuation along the coordinate segment from x
to y, bisecting the segment step whenever a sub-solve fails. Minimality of
the resulting geodesic is not checked (negatively curved families have
unique geodesics).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from fisher_rao._logging import logger
from fisher_rao._types import FloatArray, as_point, as_points
from fisher_rao.exceptions import (
    DimensionMismatchError,
    DomainError,
    IncompleteGeodesicError,
    IntegrationError,
    NonConvergenceError,
    SingularMetricError,
)
from fisher_rao.geometry.manifold import ManifoldSpec, batch_norm, norm
from fisher_rao.numerics.differentiation import fd_derivative
from fisher_rao.numerics.ode import OdeProblem, integrate_ode, integrate_ode_batch

__all__ = [
    "GeodesicPath",
    "LogResult",
    "christoffels",
    "dist",
    "dist_batch",
    "exp",
    "exp_batch",
    "geodesic",
    "geodesic_sphere",
    "log",
    "log_batch",
    "parallel_transport",
]

_JACOBIAN_STEP = 1e-6
_MAX_HALVINGS = 30
_LINE_SEARCH_STEPS = 12
_CONTINUATION_MIN_STEP = 1.0 / 1024.0


@dataclass(frozen=True)
class GeodesicPath:
    """Sampled constant-speed geodesic.

    Attributes:
        times: Sample times, strictly increasing from 0 to 1.
        points: Points on the geodesic, shape ``(N, d)``.
        velocities: Velocities at ``points``.
        speeds: Metric speed at each sample.
        length: Total metric length (the speed of the parametrization).
    """

    times: FloatArray
    points: FloatArray
    velocities: FloatArray
    speeds: FloatArray
    length: float

    @property
    def start(self) -> FloatArray:
        return self.points[0]

    @property
    def end(self) -> FloatArray:
        return self.points[-1]

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class LogResult:
    """Batched logarithm output.

    Attributes:
        vectors: Initial velocities, one row per pair.
        residuals: Final ``|exp_x(v) - y|_inf`` per pair.
        converged: Whether each pair met the shooting tolerance.
    """

    vectors: FloatArray
    residuals: FloatArray
    converged: NDArray[np.bool_]


# ── Christoffel symbols ──────────────────────────────────────────────────────


def _christoffels_from_metric(spec: ManifoldSpec, x: FloatArray) -> FloatArray:
    g = spec.metric_matrix(x)
    if spec.metric_derivative is not None:
        dg = spec.metric_derivative(x)
    else:
        dg = fd_derivative(spec.metric_matrix, x, 1)
    # term[l, i, j] = d_i g_lj + d_j g_li - d_l g_ij
    term = np.swapaxes(dg, -1, -2) + dg - np.moveaxis(dg, -1, -3)
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError:
        raise SingularMetricError(
            f"metric of {spec.name} is singular at {np.asarray(x).tolist()}",
            point=np.asarray(x).copy(),
        ) from None
    gamma = 0.5 * np.einsum("...kl,...lij->...kij", g_inv, term)
    return 0.5 * (gamma + np.swapaxes(gamma, -1, -2))


def christoffel_batch(spec: ManifoldSpec, x: FloatArray) -> FloatArray:
    """Christoffel symbols ``[..., k, i, j]`` at each row of ``x``."""
    if spec.christoffels is not None:
        return np.asarray(spec.christoffels(x), dtype=np.float64)
    return _christoffels_from_metric(spec, x)


def christoffels(spec: ManifoldSpec, x: FloatArray) -> FloatArray:
    """Gamma^k_ij at ``x`` as a ``(d, d, d)`` array indexed ``[k, i, j]``.

    Uses the family's closed form when declared, otherwise
    ``1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)`` with metric partials from
    the closed-form derivative or central differences.

    Raises:
        SingularMetricError: the metric at ``x`` cannot be inverted.
    """
    x = spec.check_point(x)
    return christoffel_batch(spec, x)


def geodesic_acceleration(
    spec: ManifoldSpec, x: FloatArray, v: FloatArray
) -> FloatArray:
    if spec.acceleration is not None:
        return spec.acceleration(x, v)
    gamma = christoffel_batch(spec, x)
    return -np.einsum("...kij,...i,...j->...k", gamma, v, v)


def _flow_rhs(spec: ManifoldSpec):
    d = spec.dim

    def rhs(t: FloatArray, state: FloatArray) -> FloatArray:
        x, v = state[:, :d], state[:, d:]
        return np.concatenate([v, geodesic_acceleration(spec, x, v)], axis=1)

    return rhs


def _flow_inside(spec: ManifoldSpec):
    d = spec.dim
    return lambda state: spec.contains(state[:, :d])


# ── exponential map ──────────────────────────────────────────────────────────


def exp_batch(
    spec: ManifoldSpec, v: FloatArray, x: FloatArray
) -> tuple[FloatArray, NDArray[np.bool_], FloatArray]:
    """Endpoints ``exp_x(v)`` for rows of ``(v, x)``.

    Returns the endpoints, a success mask and, for failed rows, the last
    time the geodesic was still inside the manifold.
    """
    v = np.asarray(v, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if spec.exp is not None:
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            y = np.asarray(spec.exp(v, x), dtype=np.float64)
        ok = spec.contains(y, margin=0.0)
        exit_time = np.where(ok, 1.0, np.nan)
        return y, ok, exit_time
    if len(v) == 0:
        return v.copy(), np.ones(0, dtype=bool), np.ones(0)
    cfg = spec.config
    result = integrate_ode_batch(
        _flow_rhs(spec),
        np.concatenate([x, v], axis=1),
        (0.0, 1.0),
        rtol=cfg.rtol,
        atol=cfg.atol,
        inside=_flow_inside(spec),
    )
    return result.y[:, : spec.dim], result.ok, result.t


def _closed_form_exit_time(spec: ManifoldSpec, v: FloatArray, x: FloatArray) -> float:
    ts = np.linspace(0.0, 1.0, 257)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        bases = np.repeat(x[None, :], len(ts), axis=0)
        path = spec.exp(ts[:, None] * v[None, :], bases)
    inside = spec.contains(path, margin=0.0)
    outside = np.flatnonzero(~inside)
    return float(ts[max(outside[0] - 1, 0)]) if outside.size else 1.0


def exp(v: FloatArray, x: FloatArray, spec: ManifoldSpec) -> FloatArray:
    """End point ``gamma(1)`` of the geodesic with ``gamma(0) = x``, ``gamma'(0) = v``.

    Raises:
        IncompleteGeodesicError: the geodesic leaves the manifold before t=1.
    """
    x = spec.check_point(x, name="base point")
    v = as_point(v, spec.dim, name="tangent vector")
    y, ok, exit_time = exp_batch(spec, v[None, :], x[None, :])
    if not ok[0]:
        t_exit = (
            _closed_form_exit_time(spec, v, x) if spec.exp is not None else exit_time[0]
        )
        raise IncompleteGeodesicError(
            f"geodesic from {x.tolist()} with velocity {v.tolist()} leaves "
            f"{spec.name} at t={t_exit:.6g}",
            exit_time=float(t_exit),
            state=y[0],
        )
    return y[0]


# ── logarithm map ────────────────────────────────────────────────────────────


def _residual(y_hat: FloatArray, y: FloatArray) -> FloatArray:
    return np.max(np.abs(y_hat - y), axis=1)


def _newton(
    spec: ManifoldSpec,
    x: FloatArray,
    y: FloatArray,
    v0: FloatArray,
    max_iter: int,
) -> LogResult:
    """Damped Newton shooting for every row; no fallback."""
    d = spec.dim
    tol = spec.config.log_tol * (1.0 + np.max(np.abs(y), axis=1))
    v = v0.copy()

    y_hat, ok, _ = exp_batch(spec, v, x)
    for _ in range(_MAX_HALVINGS):
        if np.all(ok):
            break
        bad = np.flatnonzero(~ok)
        v[bad] *= 0.5
        y_hat[bad], ok[bad], _ = exp_batch(spec, v[bad], x[bad])
    residual = np.where(ok, _residual(y_hat, y), np.inf)
    alive = ok.copy()
    eye = np.eye(d)

    for iteration in range(max_iter):
        active = np.flatnonzero(alive & (residual > tol))
        if active.size == 0:
            break
        logger.debug(
            "shooting on %s: iteration %d, %d active, max residual %.3e",
            spec.name,
            iteration,
            active.size,
            float(np.max(residual[active])),
        )
        va = v[active]
        h = _JACOBIAN_STEP * np.maximum(1.0, np.max(np.abs(va), axis=1))
        pert = (va[:, None, :] + h[:, None, None] * eye[None, :, :]).reshape(-1, d)
        base = np.repeat(x[active], d, axis=0)
        y_pert, ok_pert, _ = exp_batch(spec, pert, base)
        ok_pert = ok_pert.reshape(-1, d)
        y_pert = y_pert.reshape(-1, d, d)
        sign = np.ones((active.size, d))
        if not np.all(ok_pert):
            # one-sided the other way for columns that stepped outside
            r, c = np.nonzero(~ok_pert)
            back = va[r] - h[r, None] * eye[c]
            y_back, ok_back, _ = exp_batch(spec, back, x[active][r])
            y_pert[r, c] = y_back
            sign[r, c] = -1.0
            ok_pert[r, c] = ok_back
        usable = np.all(ok_pert, axis=1)
        jac = (y_pert - y_hat[active][:, None, :]) * (sign / h[:, None])[:, :, None]
        jac = np.swapaxes(jac, 1, 2)  # [row, out, col]

        step = np.zeros((active.size, d))
        rhs = -(y_hat[active] - y[active])
        for k in np.flatnonzero(usable):
            try:
                step[k] = np.linalg.solve(jac[k], rhs[k])
            except np.linalg.LinAlgError:
                step[k] = np.linalg.lstsq(jac[k], rhs[k], rcond=None)[0]
        alive[active[~usable]] = False

        searching = usable.copy()
        lam = np.ones(active.size)
        for _ in range(_LINE_SEARCH_STEPS):
            idx = np.flatnonzero(searching)
            if idx.size == 0:
                break
            rows_ = active[idx]
            trial = v[rows_] + lam[idx, None] * step[idx]
            y_trial, ok_trial, _ = exp_batch(spec, trial, x[rows_])
            r_trial = np.where(ok_trial, _residual(y_trial, y[rows_]), np.inf)
            better = ok_trial & (r_trial < residual[rows_])
            take = rows_[better]
            v[take] = trial[better]
            y_hat[take] = y_trial[better]
            residual[take] = r_trial[better]
            searching[idx[better]] = False
            lam[idx[~better]] *= 0.5
        stalled = active[searching]
        if stalled.size:
            logger.debug("shooting on %s: %d row(s) stalled", spec.name, stalled.size)
            alive[stalled] = False

    converged = residual <= tol
    return LogResult(vectors=v, residuals=residual, converged=converged)


def _continuation(spec: ManifoldSpec, x: FloatArray, y: FloatArray) -> LogResult:
    """Follow targets ``x + s (y - x)`` from s=0 to 1, bisecting failed steps."""
    s_done, v_done, step = 0.0, np.zeros_like(x), 0.5
    best = LogResult(
        vectors=v_done[None, :],
        residuals=np.array([np.inf]),
        converged=np.array([False]),
    )
    while s_done < 1.0:
        s_try = min(1.0, s_done + step)
        target = x + s_try * (y - x)
        guess = v_done * (s_try / s_done) if s_done > 0 else target - x
        sub = _newton(
            spec, x[None, :], target[None, :], guess[None, :], spec.config.log_max_iter
        )
        if sub.converged[0]:
            s_done, v_done = s_try, sub.vectors[0]
            best = sub
            step = min(2.0 * step, 0.5)
            continue
        step *= 0.5
        if step < _CONTINUATION_MIN_STEP:
            if s_done == 0.0:
                best = sub
            return LogResult(
                vectors=best.vectors,
                residuals=np.maximum(best.residuals, sub.residuals[0]),
                converged=np.array([False]),
            )
    return best


def log_batch(
    spec: ManifoldSpec,
    y: FloatArray,
    x: FloatArray,
    *,
    initial: FloatArray | None = None,
) -> LogResult:
    """Logarithms ``log_{x_i}(y_i)`` for rows of ``(y, x)``.

    Pairs that fail are flagged in ``converged`` instead of raising.
    """
    y = np.asarray(y, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if y.shape != x.shape:
        raise DimensionMismatchError(
            f"log_batch needs equal shapes, got {y.shape} and {x.shape}",
            expected=x.shape[-1],
            actual=y.shape[-1],
        )
    if spec.log is not None:
        with np.errstate(invalid="ignore", divide="ignore"):
            v = np.asarray(spec.log(y, x), dtype=np.float64)
        ok = np.all(np.isfinite(v), axis=1)
        return LogResult(vectors=v, residuals=np.where(ok, 0.0, np.inf), converged=ok)
    if len(x) == 0:
        return LogResult(
            vectors=x.copy(), residuals=np.zeros(0), converged=np.ones(0, bool)
        )

    v0 = (y - x) if initial is None else np.array(initial, dtype=np.float64)
    same = np.all(y == x, axis=1)
    v0 = np.where(same[:, None], 0.0, v0)
    result = _newton(spec, x, y, v0, spec.config.log_max_iter)
    v, residual, converged = (
        result.vectors.copy(),
        result.residuals.copy(),
        result.converged.copy(),
    )
    for i in np.flatnonzero(~converged):
        logger.info(
            "shooting on %s stalled for pair %d (residual %.3e); continuing along "
            "the coordinate segment",
            spec.name,
            i,
            residual[i],
        )
        sub = _continuation(spec, x[i], y[i])
        if sub.converged[0] or sub.residuals[0] < residual[i]:
            v[i], residual[i] = sub.vectors[0], sub.residuals[0]
            converged[i] = sub.converged[0]
    return LogResult(vectors=v, residuals=residual, converged=converged)


def log(
    y: FloatArray,
    x: FloatArray,
    spec: ManifoldSpec,
    *,
    initial: FloatArray | None = None,
) -> FloatArray:
    """Tangent vector ``v`` at ``x`` with ``exp_x(v) = y``.

    ``initial`` overrides the coordinate-difference first guess.

    Raises:
        NonConvergenceError: shooting missed the tolerance
            ``log_tol * (1 + |y|_inf)``; carries the best residual and iterate.
    """
    x = spec.check_point(x, name="base point")
    y = spec.check_point(y, name="target point")
    guess = None
    if initial is not None:
        guess = as_point(initial, spec.dim, name="initial")[None]
    result = log_batch(spec, y[None, :], x[None, :], initial=guess)
    if not result.converged[0]:
        raise NonConvergenceError(
            f"log on {spec.name} from {x.tolist()} to {y.tolist()} did not converge "
            f"(best residual {result.residuals[0]:.3e})",
            residual=float(result.residuals[0]),
            iterate=result.vectors[0].copy(),
        )
    return result.vectors[0]


# ── distance ─────────────────────────────────────────────────────────────────


def dist_batch(
    spec: ManifoldSpec, x: FloatArray, y: FloatArray
) -> tuple[FloatArray, NDArray[np.bool_]]:
    """Distances between rows of ``x`` and ``y`` with a per-row success mask."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if spec.dist is not None:
        with np.errstate(invalid="ignore", divide="ignore"):
            d = np.asarray(spec.dist(x, y), dtype=np.float64)
        return d, np.isfinite(d)
    result = log_batch(spec, y, x)
    d = batch_norm(result.vectors, x, spec)
    return np.where(result.converged, d, np.nan), result.converged


def dist(x: FloatArray, y: FloatArray, spec: ManifoldSpec) -> float:
    """Geodesic distance, closed form when available else ``|log_x(y)|_x``.

    Raises:
        NonConvergenceError: propagated from the shooting solver.
    """
    x = spec.check_point(x, name="x")
    y = spec.check_point(y, name="y")
    if spec.dist is not None:
        return float(spec.dist(x, y))
    return norm(log(y, x, spec), x, spec)


# ── geodesics ────────────────────────────────────────────────────────────────


def _closed_form_path(
    spec: ManifoldSpec, x: FloatArray, v: FloatArray, times: FloatArray
) -> tuple[FloatArray, FloatArray]:
    assert spec.exp is not None and spec.log is not None
    n = len(times)
    points, ok, _ = exp_batch(
        spec, times[:, None] * v[None, :], np.repeat(x[None, :], n, axis=0)
    )
    if not np.all(ok):
        first_bad = int(np.flatnonzero(~ok)[0])
        raise IncompleteGeodesicError(
            f"geodesic on {spec.name} leaves the manifold "
            f"before t={times[first_bad]:.6g}",
            exit_time=float(times[max(first_bad - 1, 0)]),
            state=points[max(first_bad - 1, 0)],
        )
    end = points[-1]
    velocities = np.empty_like(points)
    velocities[0] = v
    if n > 1:
        inner = slice(1, n - 1)
        remaining = (1.0 - times[inner])[:, None]
        velocities[inner] = (
            spec.log(np.repeat(end[None, :], n - 2, axis=0), points[inner]) / remaining
        )
        velocities[-1] = -spec.log(x[None, :], end[None, :])[0]
    return points, velocities


def _integrated_path(
    spec: ManifoldSpec, x: FloatArray, v: FloatArray, times: FloatArray
) -> tuple[FloatArray, FloatArray]:
    d = spec.dim
    if not np.any(v):
        return np.repeat(x[None, :], len(times), axis=0), np.zeros((len(times), d))
    cfg = spec.config
    problem = OdeProblem(
        rhs=lambda t, s: np.concatenate(
            [s[d:], geodesic_acceleration(spec, s[None, :d], s[None, d:])[0]]
        ),
        y0=np.concatenate([x, v]),
        t_span=(0.0, 1.0),
        rtol=cfg.rtol,
        atol=cfg.atol,
        inside=lambda s: bool(spec.contains(s[:d])),
    )
    try:
        solution = integrate_ode(problem)
    except IntegrationError as exc:
        raise IncompleteGeodesicError(
            f"geodesic on {spec.name} from {x.tolist()} leaves the manifold "
            f"at t={exc.t:.6g}",
            exit_time=exc.t,
            state=None if exc.state is None else exc.state[:d],
        ) from exc
    states = solution(times)
    return states[:, :d], states[:, d:]


def geodesic(
    x: FloatArray,
    end_or_tangent: FloatArray,
    spec: ManifoldSpec,
    n_samples: int | None = None,
    *,
    tangent: bool = False,
) -> GeodesicPath:
    """Sample the geodesic from ``x`` at ``t = k / n_samples``, k = 0..n_samples.

    By default ``end_or_tangent`` is the end point and the initial velocity
    is ``log_x(end)``; with ``tangent=True`` it is the initial velocity
    itself. ``n_samples`` defaults to ``config.geodesic_samples``.
    """
    x = spec.check_point(x, name="start point")
    n = spec.config.geodesic_samples if n_samples is None else int(n_samples)
    if n < 1:
        raise DomainError(f"n_samples must be >= 1, got {n}")
    times = np.linspace(0.0, 1.0, n + 1)
    if tangent:
        v = as_point(end_or_tangent, spec.dim, name="tangent vector")
        end = None
    else:
        end = spec.check_point(end_or_tangent, name="end point")
        v = np.zeros(spec.dim) if np.array_equal(end, x) else log(end, x, spec)

    if spec.exp is not None and spec.log is not None:
        points, velocities = _closed_form_path(spec, x, v, times)
    else:
        points, velocities = _integrated_path(spec, x, v, times)
    points[0] = x
    if end is not None:
        points[-1] = end
    speeds = batch_norm(velocities, points, spec)
    return GeodesicPath(
        times=times,
        points=points,
        velocities=velocities,
        speeds=speeds,
        length=norm(v, x, spec),
    )


def geodesic_sphere(
    center: FloatArray,
    radius: float,
    spec: ManifoldSpec,
    n_rays: int = 16,
    n_samples: int | None = None,
) -> list[GeodesicPath]:
    """Geodesic rays of length ``radius`` in equally spaced unit directions.

    The ray end points trace the geodesic sphere. Only charts of dimension
    1 (two rays) and 2 are supported.
    """
    center = spec.check_point(center, name="center")
    if radius < 0:
        raise DomainError(f"radius must be >= 0, got {radius}")
    g = spec.metric_matrix(center)
    if spec.dim == 1:
        directions = np.array([[1.0], [-1.0]])
    elif spec.dim == 2:
        if n_rays < 1:
            raise DomainError(f"n_rays must be >= 1, got {n_rays}")
        angles = 2.0 * np.pi * np.arange(n_rays) / n_rays
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    else:
        raise DimensionMismatchError(
            f"geodesic spheres need a 1- or 2-dimensional chart, {spec.name} has "
            f"{spec.dim}",
            expected=2,
            actual=spec.dim,
        )
    # orthonormal frame of g: if g = L L^T then L^{-T} maps unit to g-unit
    chol = np.linalg.cholesky(np.atleast_2d(g))
    frame = np.linalg.inv(chol).T
    return [
        geodesic(center, radius * (frame @ w), spec, n_samples, tangent=True)
        for w in directions
    ]


# ── parallel transport ───────────────────────────────────────────────────────


def parallel_transport(
    u: FloatArray, path: GeodesicPath, spec: ManifoldSpec
) -> FloatArray:
    """Transport ``u`` from the start of ``path`` to its end.

    Integrates ``u' + Gamma(gamma', u) = 0`` jointly with the geodesic
    through the path's initial point and velocity.

    Raises:
        IntegrationError: the joint system could not be integrated to t=1.
    """
    d = spec.dim
    u = as_point(u, d, name="tangent vector")
    x0 = as_points(path.points[0], d)[0]
    v0 = as_points(path.velocities[0], d)[0]
    if not np.any(v0):
        return u.copy()

    def rhs(t: FloatArray, state: FloatArray) -> FloatArray:
        x, v, w = state[:, :d], state[:, d : 2 * d], state[:, 2 * d :]
        gamma = christoffel_batch(spec, x)
        acc = -np.einsum("...kij,...i,...j->...k", gamma, v, v)
        dw = -np.einsum("...kij,...i,...j->...k", gamma, v, w)
        return np.concatenate([v, acc, dw], axis=1)

    cfg = spec.config
    result = integrate_ode_batch(
        rhs,
        np.concatenate([x0, v0, u])[None, :],
        (0.0, 1.0),
        rtol=cfg.rtol,
        atol=cfg.atol,
        inside=lambda state: spec.contains(state[:, :d]),
    )
    if not result.ok[0]:
        raise IntegrationError(
            f"parallel transport on {spec.name} stopped at t={result.t[0]:.6g}",
            t=float(result.t[0]),
            state=result.y[0].copy(),
        )
    return result.y[0, 2 * d :]
