"""Central finite differences for vectorized functions.

``f`` maps an array of shape ``(..., d)`` to ``(..., *out)`` and must be
vectorized over leading axes: all stencil points are stacked on a new
leading axis and evaluated in a single call.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from fisher_rao._types import FloatArray
from fisher_rao.exceptions import DifferentiationError, DomainError, FisherRaoError

__all__ = ["fd_derivative", "default_step"]

_EPS = np.finfo(np.float64).eps
_FIRST_ORDER_STEP = _EPS ** (1.0 / 3.0)
_SECOND_ORDER_STEP = _EPS ** 0.25
_SHRINK = 0.25


def default_step(order: int) -> float:
    """Relative step used for ``order``-th derivatives."""
    return _FIRST_ORDER_STEP if order == 1 else _SECOND_ORDER_STEP


def _stencil(d: int, order: int) -> FloatArray:
    """Offsets in units of the per-coordinate step."""
    eye = np.eye(d)
    if order == 1:
        return np.concatenate([eye, -eye])
    rows = [np.zeros(d), *eye, *(-eye)]
    for i, j in combinations(range(d), 2):
        for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            row = np.zeros(d)
            row[i], row[j] = si, sj
            rows.append(row)
    return np.array(rows)


def _combine(values: FloatArray, h: FloatArray, d: int, order: int) -> FloatArray:
    """Stencil values ``(P, ..., *out)`` to derivatives ``(..., *out, d[, d])``."""
    extra = values.ndim - 1 - (h.ndim - 1)

    def hh(idx: int) -> FloatArray:
        return h[..., idx].reshape(h.shape[:-1] + (1,) * extra)

    if order == 1:
        grads = [(values[i] - values[d + i]) / (2.0 * hh(i)) for i in range(d)]
        return np.stack(grads, axis=-1)

    center = values[0]
    hess = np.empty(center.shape + (d, d))
    for i in range(d):
        second = values[1 + i] - 2.0 * center + values[1 + d + i]
        hess[..., i, i] = second / hh(i) ** 2
    pos = 1 + 2 * d
    for i, j in combinations(range(d), 2):
        pp, pm, mp, mm = values[pos : pos + 4]
        pos += 4
        mixed = (pp - pm - mp + mm) / (4.0 * hh(i) * hh(j))
        hess[..., i, j] = mixed
        hess[..., j, i] = mixed
    return 0.5 * (hess + np.swapaxes(hess, -1, -2))


def _evaluate(
    f: Callable[[FloatArray], FloatArray], points: FloatArray
) -> FloatArray | None:
    try:
        values = np.asarray(f(points), dtype=np.float64)
    except FisherRaoError:
        return None
    if not np.all(np.isfinite(values)):
        return None
    return values


def fd_derivative(
    f: Callable[[FloatArray], FloatArray],
    x: FloatArray,
    order: int = 1,
    *,
    step: float | FloatArray | None = None,
) -> FloatArray:
    """Gradient / Jacobian (``order=1``) or Hessian (``order=2``) of ``f`` at ``x``.

    Steps are ``h_i = c * max(1, |x_i|)`` with ``c = eps**(1/3)`` for first and
    ``eps**(1/4)`` for second derivatives unless ``step`` overrides ``c``.
    The derivative axes are appended last: a scalar function gives ``(..., d)``
    or ``(..., d, d)``; a matrix-valued one gives ``(..., m, m, d)`` per-entry
    partials. Hessians are symmetrized.

    If any stencil point is outside the domain of ``f`` (a package error or
    a non-finite value) the step is shrunk once by a factor 4; a second
    failure raises :class:`DifferentiationError`.
    """
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        raise DomainError("fd_derivative needs a vector argument")
    d = x.shape[-1]
    rel = default_step(order) if step is None else np.asarray(step, dtype=np.float64)
    h = rel * np.maximum(1.0, np.abs(x))
    offsets = _stencil(d, order)
    lead = (slice(None),) + (None,) * (x.ndim - 1)

    for attempt in range(2):
        points = x[None, ...] + offsets[lead] * h[None, ...]
        values = _evaluate(f, points)
        if values is not None:
            return _combine(values, h, d, order)
        if attempt == 0:
            h = h * _SHRINK
    raise DifferentiationError(
        f"finite differences left the domain of f near x={x!r}", point=x.copy()
    )
