"""Quadrature rules for expectations over continuous and integer supports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from fisher_rao._types import FloatArray
from fisher_rao.exceptions import DomainError, QuadratureError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "quadrature_expectation",
    "adaptive_quadrature",
]

# Discrete sums stop once a whole chunk of terms is below this fraction of
# the running total.
DISCRETE_RTOL = 1e-14
_DISCRETE_CHUNK = 64
_DISCRETE_MAX_TERMS = 2_000_000
_ZERO_SUM_TERMS = 4096


@dataclass(frozen=True)
class QuadratureRule:
    """Where and how to evaluate an expectation.

    Continuous rules use ``nodes`` Gauss-Legendre points on
    ``[lower, upper]``. Discrete rules sum over the integers
    ``lower, lower + 1, ..., upper``; ``upper=None`` means the sum runs until
    the tail falls below ``DISCRETE_RTOL`` of the accumulated value.
    """

    lower: float
    upper: float | None
    nodes: int = 100
    discrete: bool = False

    def __post_init__(self) -> None:
        if self.nodes < 1:
            raise DomainError(f"node count must be positive, got {self.nodes}")
        if self.discrete:
            if not float(self.lower).is_integer():
                raise DomainError(
                    f"discrete lower bound must be integral: {self.lower}"
                )
            if self.upper is not None and self.upper < self.lower:
                raise DomainError(
                    f"empty integer range [{self.lower}, {self.upper}]"
                )
        else:
            if self.upper is None or not (
                math.isfinite(self.lower) and math.isfinite(self.upper)
            ):
                raise DomainError("continuous rules need a finite interval")
            if not self.lower < self.upper:
                raise DomainError(
                    f"interval must satisfy a < b, got [{self.lower}, {self.upper}]"
                )

    def points_and_weights(self) -> tuple[FloatArray, FloatArray]:
        """Nodes and weights of the continuous rule on ``[lower, upper]``."""
        if self.discrete:
            raise DomainError("discrete rules have no fixed node set")
        assert self.upper is not None
        return gauss_legendre(self.nodes, self.lower, self.upper)


@lru_cache(maxsize=32)
def _reference_rule(n: int) -> tuple[FloatArray, FloatArray]:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> tuple[FloatArray, FloatArray]:
    """Gauss-Legendre nodes and weights mapped from [-1, 1] to [a, b]."""
    x, w = _reference_rule(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def _check_finite(values: FloatArray, nodes: FloatArray) -> None:
    flat = values.reshape(values.shape[0], -1)
    bad = ~np.all(np.isfinite(flat), axis=1)
    if np.any(bad):
        node = float(nodes[np.argmax(bad)])
        raise QuadratureError(f"integrand is not finite at node x={node!r}", node=node)


def _discrete_sum(
    f: Callable[[FloatArray], FloatArray], rule: QuadratureRule
) -> FloatArray:
    start = int(rule.lower)
    stop = None if rule.upper is None else int(rule.upper)
    total: FloatArray | None = None
    count = 0
    while True:
        end = start + _DISCRETE_CHUNK
        if stop is not None:
            end = min(end, stop + 1)
        ks = np.arange(start, end, dtype=np.float64)
        values = np.asarray(f(ks), dtype=np.float64)
        _check_finite(values, ks)
        chunk = values.sum(axis=0)
        total = chunk if total is None else total + chunk
        count += len(ks)
        if stop is not None and end > stop:
            return total
        tail = np.max(np.abs(values[-_DISCRETE_CHUNK // 2 :]))
        scale = np.max(np.abs(total))
        if scale > 0.0 and tail <= DISCRETE_RTOL * scale:
            return total
        if scale == 0.0 and count >= _ZERO_SUM_TERMS:
            return total
        if count >= _DISCRETE_MAX_TERMS:
            raise QuadratureError(
                f"discrete sum did not settle after {count} terms",
                node=float(end - 1),
            )
        start = end


def quadrature_expectation(
    f: Callable[[FloatArray], FloatArray], rule: QuadratureRule
) -> float | FloatArray:
    """Integrate (or sum) ``f`` under ``rule``.

    ``f`` is called once per batch of nodes with a 1-D array of abscissae
    and must return an array whose first axis runs over the nodes; trailing
    axes are integrated entry-wise, so matrix-valued integrands work.
    """
    if rule.discrete:
        result = _discrete_sum(f, rule)
    else:
        x, w = rule.points_and_weights()
        values = np.asarray(f(x), dtype=np.float64)
        _check_finite(values, x)
        result = np.tensordot(w, values, axes=(0, 0))
    return float(result) if np.ndim(result) == 0 else result


def adaptive_quadrature(
    f: Callable[[FloatArray], FloatArray],
    a: float,
    b: float,
    *,
    tol: float = 1e-13,
    order: int = 20,
    max_intervals: int = 10_000,
) -> float:
    """Integrate a scalar function on [a, b] by bisection of Gauss-Legendre panels.

    A panel is accepted when its rule and the sum over its two halves agree
    to ``tol`` relative to the running integral (absolute below 1).
    """
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0

    def panel(lo: float, hi: float) -> float:
        x, w = gauss_legendre(order, lo, hi)
        values = np.asarray(f(x), dtype=np.float64)
        _check_finite(values, x)
        return float(w @ values)

    total = 0.0
    stack = [(a, b, panel(a, b))]
    processed = 0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = panel(lo, mid), panel(mid, hi)
        processed += 1
        if abs(left + right - whole) <= tol * max(1.0, abs(total + whole)) or (
            hi - lo <= 1e-14 * max(1.0, abs(lo))
        ):
            total += left + right
            continue
        if processed >= max_intervals:
            raise QuadratureError(
                f"adaptive quadrature did not converge on [{a}, {b}]", node=mid
            )
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    return sign * total
