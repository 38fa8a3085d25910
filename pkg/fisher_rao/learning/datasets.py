"""Synthetic datasets for the clustering and classification experiments."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from fisher_rao._types import FloatArray, IntArray
from fisher_rao.exceptions import DomainError
from fisher_rao.families._base import RandomState, as_generator

__all__ = ["MEAN_LINE_VALUES", "mean_lines_dataset", "synthetic_dirichlet_classes"]

MEAN_LINE_VALUES = tuple(1.0 / i for i in range(1, 6)) + tuple(
    float(i) for i in range(2, 10)
)


def mean_lines_dataset(
    values: Sequence[float] = MEAN_LINE_VALUES, factor: float = 5.0
) -> tuple[FloatArray, IntArray]:
    """Beta parameters on the two lines ``b = factor * a`` and ``a = factor * b``.

    Points on one line share the same mean, ``1 / (1 + factor)`` or
    ``factor / (1 + factor)``. Returns the points, first line first, and the
    line index (0 or 1) of each point.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0 or np.any(v <= 0) or not factor > 0:
        raise DomainError("values and factor must be positive")
    points = np.concatenate(
        [np.stack([v, factor * v], axis=1), np.stack([factor * v, v], axis=1)]
    )
    labels = np.repeat(np.array([0, 1], dtype=np.int64), v.size)
    return points, labels


def synthetic_dirichlet_classes(
    n_classes: int = 4,
    per_class: int = 15,
    dim: int = 10,
    seed: RandomState = None,
    *,
    concentration: tuple[float, float] = (2.0, 200.0),
    jitter: float = 0.1,
) -> tuple[FloatArray, IntArray]:
    """Dirichlet parameters grouped in classes of distinct mean shape.

    Class ``c`` has mean proportional to 1 plus 4 on its own block of
    coordinates. Each point scales its class mean by a concentration drawn
    log-uniformly from ``concentration`` and applies independent
    log-normal noise of scale ``jitter`` to every coordinate.
    """
    if n_classes < 1 or per_class < 1 or dim < n_classes:
        raise DomainError(
            f"need n_classes >= 1, per_class >= 1 and dim >= n_classes, got "
            f"{n_classes}, {per_class}, {dim}"
        )
    lo, hi = concentration
    if not 0 < lo <= hi:
        raise DomainError(f"invalid concentration range {concentration}")
    rng = as_generator(seed)
    blocks = np.array_split(np.arange(dim), n_classes)
    points = []
    labels = []
    for c, block in enumerate(blocks):
        shape = np.ones(dim)
        shape[block] += 4.0
        shape /= shape.sum()
        scale = np.exp(rng.uniform(np.log(lo), np.log(hi), size=per_class))
        noise = np.exp(jitter * rng.standard_normal((per_class, dim)))
        points.append(scale[:, None] * shape[None, :] * noise)
        labels.append(np.full(per_class, c, dtype=np.int64))
    return np.concatenate(points), np.concatenate(labels)
