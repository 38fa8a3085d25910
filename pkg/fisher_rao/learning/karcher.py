"""Karcher (Frechet) mean by Riemannian gradient descent."""

from __future__ import annotations

import numpy as np

from fisher_rao._logging import logger
from fisher_rao._types import FloatArray, as_point, as_points
from fisher_rao.exceptions import (
    DomainError,
    IncompleteGeodesicError,
    NonConvergenceError,
)
from fisher_rao.geometry import ManifoldSpec, batch_norm, exp, log_batch, norm

__all__ = ["karcher_mean"]

_MIN_STEP = 2.0**-20


def _logs(
    spec: ManifoldSpec, points: FloatArray, mu: FloatArray, initial: FloatArray | None
) -> FloatArray | None:
    base = np.repeat(mu[None, :], len(points), axis=0)
    result = log_batch(spec, points, base, initial=initial)
    return result.vectors if np.all(result.converged) else None


def karcher_mean(
    points: object,
    spec: ManifoldSpec,
    tol: float = 1e-6,
    max_iter: int = 200,
    *,
    initial: object = None,
) -> FloatArray:
    """Point minimizing the sum of squared geodesic distances to ``points``.

    Iterates ``mu <- exp_mu(tau * mean_i log_mu(x_i))`` starting from
    ``initial`` (default: the coordinate mean, or the first point when the
    coordinate mean is outside the manifold). ``tau`` starts at 1 and is
    halved until the objective or the gradient norm decreases. Stops when
    ``|mean_i log_mu(x_i)|_mu <= tol``.

    Raises:
        NonConvergenceError: ``max_iter`` reached, every step size failed, or
            a logarithm could not be computed; carries the last iterate.
    """
    x = as_points(points, spec.dim)
    if len(x) == 0:
        raise DomainError("karcher_mean needs at least one point")
    for row in x:
        spec.check_point(row)
    if len(x) == 1:
        return x[0].copy()

    if initial is not None:
        mu = as_point(initial, spec.dim, name="initial")
        mu = spec.check_point(mu, name="initial")
    else:
        mu = x.mean(axis=0)
        if not bool(spec.contains(mu)):
            mu = x[0].copy()

    logs = _logs(spec, x, mu, None)
    if logs is None:
        raise NonConvergenceError(
            f"karcher_mean on {spec.name}: logarithms at the starting point failed",
            residual=float("inf"),
            iterate=mu,
        )
    bases = np.repeat(mu[None], len(x), 0)
    objective = float(np.sum(batch_norm(logs, bases, spec) ** 2))
    gradient = logs.mean(axis=0)
    residual = norm(gradient, mu, spec)

    for iteration in range(max_iter):
        if residual <= tol:
            logger.debug(
                "karcher_mean on %s converged after %d iterations", spec.name, iteration
            )
            return mu
        step = 1.0
        while True:
            candidate = None
            try:
                candidate = exp(step * gradient, mu, spec)
            except IncompleteGeodesicError:
                pass
            if candidate is not None:
                guess = logs - step * gradient[None, :]
                cand_logs = _logs(spec, x, candidate, guess)
                if cand_logs is not None:
                    base = np.repeat(candidate[None], len(x), 0)
                    cand_norms = batch_norm(cand_logs, base, spec)
                    cand_objective = float(np.sum(cand_norms**2))
                    cand_gradient = cand_logs.mean(axis=0)
                    cand_residual = norm(cand_gradient, candidate, spec)
                    if cand_objective <= objective or cand_residual < residual:
                        break
            step *= 0.5
            if step < _MIN_STEP:
                raise NonConvergenceError(
                    f"karcher_mean on {spec.name}: no step decreases the objective "
                    f"(gradient norm {residual:.3e})",
                    residual=residual,
                    iterate=mu,
                )
        if step < 1.0:
            logger.debug("karcher_mean on %s: damped step %.3g", spec.name, step)
        mu, logs = candidate, cand_logs
        objective, gradient, residual = cand_objective, cand_gradient, cand_residual

    if residual <= tol:
        return mu
    raise NonConvergenceError(
        f"karcher_mean on {spec.name} did not converge in {max_iter} iterations "
        f"(gradient norm {residual:.3e})",
        residual=residual,
        iterate=mu,
    )
