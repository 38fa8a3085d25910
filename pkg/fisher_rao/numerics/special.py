"""Gamma-function family: log-gamma and polygamma of orders 0, 1, 2.

All functions accept scalars or arrays and return the same shape. Arguments
must be strictly positive; anything else raises :class:`DomainError`.
"""

from __future__ import annotations

import math
from typing import Union, overload

import numpy as np
from numpy.typing import ArrayLike

from fisher_rao._types import FloatArray
from fisher_rao.exceptions import DomainError

__all__ = [
    "ln_gamma",
    "polygamma",
    "digamma",
    "trigamma",
    "tetragamma",
    "trigamma_tetragamma",
]

Real = Union[float, FloatArray]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli numbers B_2 .. B_16 for the asymptotic series.
_BERNOULLI = np.array(
    [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ]
)
_ASYMPTOTIC_FROM = 8.0


def _positive(x: ArrayLike, func: str) -> FloatArray:
    arr = np.asarray(x, dtype=np.float64)
    bad = ~(arr > 0.0)
    if np.any(bad):
        offender = arr[bad].flat[0] if arr.ndim else float(arr)
        raise DomainError(f"{func} requires x > 0, got {offender!r}")
    return arr


def _out(arr: FloatArray) -> Real:
    return float(arr) if arr.ndim == 0 else arr


def _lanczos(z: FloatArray) -> FloatArray:
    """log Gamma for z >= 0.5."""
    zm = z - 1.0
    a = np.full_like(zm, _LANCZOS_COEF[0])
    for i in range(1, len(_LANCZOS_COEF)):
        a = a + _LANCZOS_COEF[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(a)


@overload
def ln_gamma(x: float) -> float: ...
@overload
def ln_gamma(x: ArrayLike) -> Real: ...
def ln_gamma(x: ArrayLike) -> Real:
    """Natural log of the gamma function for x > 0.

    Uses the Lanczos approximation (g=7) and the reflection formula
    below 1/2. Relative accuracy is around 1e-15.
    """
    arr = _positive(x, "ln_gamma")
    flat = np.atleast_1d(arr)
    small = flat < 0.5
    out = np.empty_like(flat)
    out[~small] = _lanczos(flat[~small])
    if np.any(small):
        xs = flat[small]
        out[small] = np.log(np.pi / np.sin(np.pi * xs)) - _lanczos(1.0 - xs)
    return _out(out.reshape(arr.shape))


def _shift(arr: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Number of unit shifts taking each entry to at least ``_ASYMPTOTIC_FROM``."""
    n = np.maximum(np.ceil(_ASYMPTOTIC_FROM - arr), 0.0)
    return n, arr + n


def _digamma(arr: FloatArray) -> FloatArray:
    n, z = _shift(arr)
    acc = np.zeros_like(arr)
    for i in range(int(n.max(initial=0.0))):
        acc -= np.where(i < n, 1.0 / (arr + i), 0.0)
    z2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    zpow = z2.copy()
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * zpow
        zpow = zpow * z2
    return acc + np.log(z) - 0.5 / z - series


def _trigamma(arr: FloatArray) -> FloatArray:
    n, z = _shift(arr)
    acc = np.zeros_like(arr)
    for i in range(int(n.max(initial=0.0))):
        xi = arr + i
        acc += np.where(i < n, 1.0 / (xi * xi), 0.0)
    zi = 1.0 / z
    z2 = zi * zi
    series = np.zeros_like(z)
    zpow = z2 * zi
    for b in _BERNOULLI:
        series += b * zpow
        zpow = zpow * z2
    return acc + zi + 0.5 * z2 + series


def _tetragamma(arr: FloatArray) -> FloatArray:
    n, z = _shift(arr)
    acc = np.zeros_like(arr)
    for i in range(int(n.max(initial=0.0))):
        xi = arr + i
        acc -= np.where(i < n, 2.0 / (xi * xi * xi), 0.0)
    zi = 1.0 / z
    z2 = zi * zi
    series = np.zeros_like(z)
    zpow = z2 * z2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += (2 * k + 1) * b * zpow
        zpow = zpow * z2
    return acc - z2 - z2 * zi - series


_ORDERS = {0: _digamma, 1: _trigamma, 2: _tetragamma}


def polygamma(order: int, x: ArrayLike) -> Real:
    """Polygamma function psi^(order)(x) for order in {0, 1, 2} and x > 0.

    Arguments below 8 are shifted upward with the recurrence
    psi^(k)(x) = psi^(k)(x + 1) - (-1)^k k! / x^(k+1), then the asymptotic
    Bernoulli series is summed.
    """
    try:
        impl = _ORDERS[order]
    except KeyError:
        raise DomainError(f"polygamma order must be 0, 1 or 2, got {order!r}") from None
    arr = _positive(x, "polygamma")
    return _out(impl(np.atleast_1d(arr)).reshape(arr.shape))


def digamma(x: ArrayLike) -> Real:
    return polygamma(0, x)


def trigamma(x: ArrayLike) -> Real:
    return polygamma(1, x)


def tetragamma(x: ArrayLike) -> Real:
    return polygamma(2, x)


def trigamma_tetragamma(x: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """psi'(x) and psi''(x) as arrays, sharing the domain check."""
    arr = np.atleast_1d(_positive(x, "polygamma"))
    shape = np.shape(x)
    return _trigamma(arr).reshape(shape), _tetragamma(arr).reshape(shape)
