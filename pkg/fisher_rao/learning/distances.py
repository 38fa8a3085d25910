"""Distance matrices over a manifold."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from fisher_rao._logging import logger
from fisher_rao._types import FloatArray, as_points
from fisher_rao.exceptions import FisherRaoError
from fisher_rao.geometry import ManifoldSpec, dist, dist_batch

__all__ = ["DistanceMatrix", "cross_distances", "pairwise_distances"]


@dataclass(frozen=True)
class DistanceMatrix:
    """Distances with the pairs that could not be computed.

    Attributes:
        values: Distance matrix; failed entries are NaN.
        failed: ``(i, j)`` index pairs whose distance failed.
    """

    values: FloatArray
    failed: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failed


def _rows(spec: ManifoldSpec, x: FloatArray, y: FloatArray) -> FloatArray:
    try:
        d, ok = dist_batch(spec, x, y)
        return np.where(ok, d, np.nan)
    except FisherRaoError:
        pass
    out = np.full(len(x), np.nan)
    for r in range(len(x)):
        try:
            out[r] = dist(x[r], y[r], spec)
        except FisherRaoError as exc:
            logger.debug("distance row %d on %s failed: %s", r, spec.name, exc)
    return out


def _distances(
    spec: ManifoldSpec, x: FloatArray, y: FloatArray, workers: int | None
) -> FloatArray:
    """Row-wise ``dist(x[r], y[r])``, NaN where the solver failed."""
    n_workers = spec.config.workers if workers is None else int(workers)
    if n_workers <= 1 or len(x) < 2:
        return _rows(spec, x, y)
    chunks = np.array_split(np.arange(len(x)), min(n_workers, len(x)))
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        parts = list(pool.map(lambda idx: _rows(spec, x[idx], y[idx]), chunks))
    return np.concatenate(parts)


def _report(spec: ManifoldSpec, pairs: list[tuple[int, int]]) -> None:
    for i, j in pairs:
        logger.warning(
            "distance between points %d and %d on %s failed", i, j, spec.name
        )


def pairwise_distances(
    points: object, spec: ManifoldSpec, *, workers: int | None = None
) -> DistanceMatrix:
    """Symmetric matrix of geodesic distances between rows of ``points``.

    Each pair is solved once; failed pairs are NaN and listed in ``failed``.
    ``workers`` defaults to ``spec.config.workers``.
    """
    x = as_points(points, spec.dim)
    n = len(x)
    values = np.zeros((n, n))
    i, j = np.triu_indices(n, 1)
    if i.size:
        d = _distances(spec, x[i], x[j], workers)
        values[i, j] = d
        values[j, i] = d
    bad = np.isnan(values[i, j])
    failed = [(int(a), int(b)) for a, b in zip(i[bad], j[bad])]
    _report(spec, failed)
    return DistanceMatrix(values=values, failed=tuple(failed))


def cross_distances(
    a: object, b: object, spec: ManifoldSpec, *, workers: int | None = None
) -> DistanceMatrix:
    """``values[i, j] = dist(a[i], b[j])``."""
    xa = as_points(a, spec.dim, name="a")
    xb = as_points(b, spec.dim, name="b")
    i, j = np.meshgrid(np.arange(len(xa)), np.arange(len(xb)), indexing="ij")
    i, j = i.ravel(), j.ravel()
    d = _distances(spec, xa[i], xb[j], workers) if i.size else np.zeros(0)
    values = d.reshape(len(xa), len(xb))
    bad = np.isnan(d)
    failed = [(int(r), int(c)) for r, c in zip(i[bad], j[bad])]
    _report(spec, failed)
    return DistanceMatrix(values=values, failed=tuple(failed))
