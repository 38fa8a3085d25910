"""Array aliases and input coercion shared across the package."""

from __future__ import annotations

from typing import Any, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from fisher_rao.exceptions import DimensionMismatchError, DomainError

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]
PointLike = Union[ArrayLike, float]


def as_array(value: Any, *, name: str = "value") -> FloatArray:
    """Convert to a float64 array and reject NaN or infinite entries."""
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries: {arr!r}")
    return arr


def as_point(value: Any, dim: int, *, name: str = "point") -> FloatArray:
    """Coerce ``value`` to a vector of length ``dim`` (scalars allowed for dim 1)."""
    arr = as_array(value, name=name)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise DimensionMismatchError(
            f"{name} must have {dim} coordinates, got shape {arr.shape}",
            expected=dim,
            actual=arr.shape[-1] if arr.ndim else 1,
        )
    return arr


def as_points(value: Any, dim: int, *, name: str = "points") -> FloatArray:
    """Coerce ``value`` to an ``(N, dim)`` array; a single point becomes N=1."""
    arr = as_array(value, name=name)
    if dim == 1 and arr.ndim <= 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionMismatchError(
            f"{name} must have shape (N, {dim}), got {arr.shape}",
            expected=dim,
            actual=arr.shape[-1] if arr.ndim else 1,
        )
    return arr
