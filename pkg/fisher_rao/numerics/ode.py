"""Adaptive Dormand-Prince 5(4) integration with Hermite dense output.

The core loop advances a whole batch of independent systems at once: every
row keeps its own time, step size and accept/reject decision, so thousands
of geodesics can be shot in one call. :func:`integrate_ode` is the
single-system front end that also records accepted steps for dense output.

Domain safeguard: an optional ``inside`` predicate is checked on every stage
state. A stage outside the domain (or a non-finite derivative) rejects the
step and quarters the step size; when the step underflows the row is marked
failed and keeps its last valid state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from fisher_rao._logging import logger
from fisher_rao._types import FloatArray
from fisher_rao.exceptions import DomainError, IntegrationError

__all__ = [
    "OdeProblem",
    "OdeSolution",
    "BatchOdeResult",
    "integrate_ode",
    "integrate_ode_batch",
]

BatchRhs = Callable[[FloatArray, FloatArray], FloatArray]
Inside = Callable[[FloatArray], NDArray[np.bool_]]

# ── Dormand-Prince tableau ───────────────────────────────────────────────────

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B4 = np.array(
    [
        5179 / 57600,
        0.0,
        7571 / 16695,
        393 / 640,
        -92097 / 339200,
        187 / 2100,
        1 / 40,
    ]
)
_E = np.array([*_A[6], 0.0]) - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_REJECT_FACTOR = 0.25
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class OdeProblem:
    """Initial value problem y' = rhs(t, y), y(t0) = y0 on [t0, t1].

    ``inside`` optionally restricts the states the integrator may visit.
    """

    rhs: Callable[[float, FloatArray], FloatArray]
    y0: FloatArray
    t_span: tuple[float, float]
    rtol: float = 1e-10
    atol: float = 1e-12
    inside: Callable[[FloatArray], bool] | None = None
    max_steps: int = 100_000

    def __post_init__(self) -> None:
        t0, t1 = self.t_span
        if not t1 > t0:
            raise DomainError(f"t_span must satisfy t1 > t0, got {self.t_span}")
        if self.rtol <= 0 or self.atol <= 0:
            raise DomainError("tolerances must be > 0")
        object.__setattr__(self, "y0", np.atleast_1d(np.asarray(self.y0, float)))

    @property
    def dim(self) -> int:
        return int(self.y0.shape[0])


@dataclass(frozen=True)
class OdeSolution:
    """Accepted steps of a single trajectory with cubic Hermite interpolation.

    Attributes:
        t: Accepted times, strictly increasing, ``t[0] = t0`` and ``t[-1] = t1``.
        y: States at ``t``.
        f: Derivatives at ``t`` (the Hermite slopes).
    """

    t: FloatArray
    y: FloatArray
    f: FloatArray = field(repr=False)

    @property
    def final(self) -> FloatArray:
        return self.y[-1]

    def __call__(self, t: float | FloatArray) -> FloatArray:
        """Interpolated state(s) at ``t``; shape ``(n,)`` or ``(len(t), n)``."""
        tq = np.asarray(t, dtype=np.float64)
        scalar = tq.ndim == 0
        tq = np.atleast_1d(tq)
        if np.any(tq < self.t[0] - 1e-12) or np.any(tq > self.t[-1] + 1e-12):
            raise DomainError(
                f"dense output requested outside [{self.t[0]}, {self.t[-1]}]"
            )
        if len(self.t) == 1:
            out = np.repeat(self.y[:1], len(tq), axis=0)
            return out[0] if scalar else out
        idx = np.clip(np.searchsorted(self.t, tq, side="right") - 1, 0, len(self.t) - 2)
        h = (self.t[idx + 1] - self.t[idx])[:, None]
        s = ((tq - self.t[idx])[:, None]) / h
        s2, s3 = s * s, s * s * s
        out = (
            (2 * s3 - 3 * s2 + 1) * self.y[idx]
            + (s3 - 2 * s2 + s) * h * self.f[idx]
            + (-2 * s3 + 3 * s2) * self.y[idx + 1]
            + (s3 - s2) * h * self.f[idx + 1]
        )
        return out[0] if scalar else out


@dataclass(frozen=True)
class BatchOdeResult:
    """Final states of a batch integration.

    Attributes:
        y: State reached by each row (last valid state for failed rows).
        t: Time reached by each row.
        ok: Whether the row reached ``t1``.
    """

    y: FloatArray
    t: FloatArray
    ok: NDArray[np.bool_]


def _rms(x: FloatArray) -> FloatArray:
    return np.sqrt(np.mean(x * x, axis=1))


def _initial_step(
    rhs: BatchRhs,
    t0: float,
    y0: FloatArray,
    f0: FloatArray,
    span: float,
    rtol: float,
    atol: float,
    inside: Inside | None,
) -> FloatArray:
    """Starting step per row (Hairer, Norsett and Wanner heuristic)."""
    scale = np.maximum(rtol * np.abs(y0), atol)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = np.where((d0 < 1e-5) | (d1 < 1e-5), 1e-6, 0.01 * d0 / np.maximum(d1, 1e-300))
    h0 = np.minimum(h0, span)
    y1 = y0 + h0[:, None] * f0
    usable = np.all(np.isfinite(y1), axis=1)
    if inside is not None:
        usable &= inside(y1)
    y1 = np.where(usable[:, None], y1, y0)
    f1 = rhs(np.full(len(y0), t0) + h0, y1)
    usable &= np.all(np.isfinite(f1), axis=1)
    d2 = _rms(np.where(usable[:, None], f1 - f0, 0.0) / scale) / h0
    dmax = np.maximum(d1, d2)
    h1 = np.where(
        dmax <= 1e-15,
        np.maximum(1e-6, h0 * 1e-3),
        (0.01 / np.maximum(dmax, 1e-300)) ** 0.2,
    )
    h = np.where(usable, np.minimum(100 * h0, h1), h0)
    return np.minimum(h, span)


def _dopri(
    rhs: BatchRhs,
    y0: FloatArray,
    t0: float,
    t1: float,
    rtol: float,
    atol: float,
    inside: Inside | None,
    max_steps: int,
    record: bool,
) -> tuple[BatchOdeResult, list[tuple[float, FloatArray, FloatArray]]]:
    y = np.array(y0, dtype=np.float64, copy=True)
    rows = y.shape[0]
    t = np.full(rows, t0, dtype=np.float64)
    ok = np.all(np.isfinite(y), axis=1)
    if inside is not None:
        ok &= inside(y)
    f = np.zeros_like(y)
    if np.any(ok):
        f[ok] = rhs(t[ok], y[ok])
    ok &= np.all(np.isfinite(f), axis=1)
    done = ~ok
    history: list[tuple[float, FloatArray, FloatArray]] = []
    if record and ok[0]:
        history.append((t0, y[0].copy(), f[0].copy()))

    span = t1 - t0
    h = np.zeros(rows)
    if np.any(ok):
        h[ok] = _initial_step(rhs, t0, y[ok], f[ok], span, rtol, atol, inside)
    steps = np.zeros(rows, dtype=np.int64)

    while True:
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        ta, ya = t[act], y[act]
        remaining = t1 - ta
        last = h[act] >= remaining
        ha = np.where(last, remaining, h[act])
        hc = ha[:, None]

        stages = [f[act]]
        valid = np.ones(act.size, dtype=bool)
        y_new = ya
        for s in range(1, 7):
            incr = sum(a * k for a, k in zip(_A[s], stages) if a != 0.0)
            ys = ya + hc * incr
            good = np.all(np.isfinite(ys), axis=1)
            if inside is not None:
                good &= inside(np.where(good[:, None], ys, ya))
            valid &= good
            ys = np.where(valid[:, None], ys, ya)
            ks = rhs(ta + _C[s] * ha, ys)
            valid &= np.all(np.isfinite(ks), axis=1)
            stages.append(np.where(valid[:, None], ks, 0.0))
            y_new = ys

        err = hc * sum(e * k for e, k in zip(_E, stages) if e != 0.0)
        scale = np.maximum(rtol * np.maximum(np.abs(ya), np.abs(y_new)), atol)
        err_norm = np.max(np.abs(err) / scale, axis=1)
        err_norm[~valid] = np.inf
        accept = err_norm <= 1.0

        with np.errstate(divide="ignore"):
            grow = _SAFETY * err_norm ** -0.2
        grow_ok = np.where(err_norm == 0.0, _MAX_FACTOR, grow)
        factor = np.where(
            accept,
            np.clip(grow_ok, _MIN_FACTOR, _MAX_FACTOR),
            np.where(valid, np.clip(grow, _MIN_FACTOR, 1.0), _REJECT_FACTOR),
        )

        acc_rows = act[accept]
        t[acc_rows] = np.where(last[accept], t1, ta[accept] + ha[accept])
        y[acc_rows] = y_new[accept]
        f[acc_rows] = stages[6][accept]
        finished = acc_rows[last[accept]]
        done[finished] = True

        h_next = ha * factor
        h[act] = np.where(accept & last, h[act], h_next)
        steps[act] += 1

        if record and act[0] == 0 and accept[0]:
            history.append((float(t[0]), y[0].copy(), f[0].copy()))

        underflow = (~accept) & (h_next < 16 * _EPS * np.maximum(1.0, np.abs(ta)))
        exhausted = (steps[act] >= max_steps) & ~(accept & last)
        failed = act[underflow | exhausted]
        if failed.size:
            logger.debug(
                "ode: %d row(s) stopped early at t=%s", failed.size, t[failed][:5]
            )
            ok[failed] = False
            done[failed] = True

    return BatchOdeResult(y=y, t=t, ok=ok), history


def integrate_ode_batch(
    rhs: BatchRhs,
    y0: FloatArray,
    t_span: tuple[float, float],
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    inside: Inside | None = None,
    max_steps: int = 100_000,
) -> BatchOdeResult:
    """Integrate ``len(y0)`` independent systems over the same time span.

    ``rhs(t, y)`` receives a vector of per-row times and an ``(B, n)`` state
    array and returns the ``(B, n)`` derivatives. ``inside(y)`` returns one
    boolean per row. Failed rows are reported through ``ok`` rather than an
    exception.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise DomainError(f"t_span must satisfy t1 > t0, got {t_span}")
    y0 = np.asarray(y0, dtype=np.float64)
    if y0.ndim != 2:
        raise DomainError(f"batch initial state must be 2-D, got shape {y0.shape}")
    result, _ = _dopri(rhs, y0, t0, t1, rtol, atol, inside, max_steps, record=False)
    return result


def integrate_ode(problem: OdeProblem) -> OdeSolution:
    """Solve ``problem`` with error control ``|err| <= max(rtol*|y|, atol)``.

    Raises:
        IntegrationError: the step size underflowed (stiffness, a singularity
            or the trajectory leaving the ``inside`` domain) or ``max_steps``
            was exhausted. ``t`` and ``state`` hold the last valid state.
    """
    t0, t1 = problem.t_span

    def rhs(t: FloatArray, y: FloatArray) -> FloatArray:
        return np.asarray(problem.rhs(float(t[0]), y[0]), dtype=np.float64)[None, :]

    inside = None
    if problem.inside is not None:
        user_inside = problem.inside

        def inside(y: FloatArray) -> NDArray[np.bool_]:
            return np.array([bool(user_inside(y[0]))])

    result, history = _dopri(
        rhs,
        problem.y0[None, :],
        float(t0),
        float(t1),
        problem.rtol,
        problem.atol,
        inside,
        problem.max_steps,
        record=True,
    )
    if not result.ok[0]:
        raise IntegrationError(
            f"integration stopped at t={result.t[0]!r} before reaching t1={t1!r}",
            t=float(result.t[0]),
            state=result.y[0].copy(),
        )
    ts = np.array([entry[0] for entry in history])
    ys = np.array([entry[1] for entry in history])
    fs = np.array([entry[2] for entry in history])
    return OdeSolution(t=ts, y=ys, f=fs)
