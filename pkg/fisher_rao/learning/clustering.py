"""K-means on a Riemannian manifold.

Assignment uses geodesic distances and the update step replaces each
centroid by the Karcher mean of its cluster. Seeding follows k-means++ with
manifold distances. An empty cluster is reseeded at the point farthest
from its assigned centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fisher_rao._logging import logger
from fisher_rao._types import FloatArray, IntArray, as_points
from fisher_rao.exceptions import DomainError
from fisher_rao.families._base import RandomState, as_generator
from fisher_rao.geometry import ManifoldSpec
from fisher_rao.learning.distances import cross_distances, pairwise_distances
from fisher_rao.learning.karcher import karcher_mean

__all__ = ["ClusteringResult", "riemannian_kmeans"]


@dataclass(frozen=True)
class ClusteringResult:
    """Output of :func:`riemannian_kmeans`.

    Attributes:
        centroids: Cluster centers, shape ``(k, d)``.
        labels: Index of the nearest centroid for every point.
        inertia: Sum of squared distances to the assigned centroids.
        distance_sum: Sum of distances to the assigned centroids.
        n_iter: Assignment steps performed by the returned run.
        history: Objective after each assignment step (non-increasing).
        reseeds: Empty-cluster reseeds in the returned run.
    """

    centroids: FloatArray
    labels: IntArray
    inertia: float
    distance_sum: float
    n_iter: int
    history: tuple[float, ...]
    reseeds: int


def _finite(d: FloatArray) -> FloatArray:
    return np.where(np.isnan(d), np.inf, d)


def _seed(pairwise: FloatArray, k: int, rng: np.random.Generator) -> list[int]:
    """k-means++ on a precomputed distance matrix."""
    n = len(pairwise)
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        closest = np.min(_finite(pairwise[:, chosen]), axis=1)
        weights = np.where(np.isfinite(closest), closest**2, 0.0)
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0.0:
            pick = int(rng.choice(n, p=weights / total))
        else:
            rest = np.setdiff1d(np.arange(n), chosen)
            pick = int(rng.choice(rest))
        chosen.append(pick)
    return chosen


def _reseed_points(
    labels: IntArray, d: FloatArray, nearest: FloatArray, k: int
) -> dict[int, int]:
    """Point index restarting each empty cluster, farthest members first.

    A point nearest to another centroid or already used for an earlier
    empty cluster is skipped while any other point is left.
    """
    order = np.argsort(-nearest, kind="stable")
    reseeded: dict[int, int] = {}
    for j in range(k):
        if np.any(labels == j):
            continue
        used = set(reseeded.values())
        taken = {int(np.argmin(d[:, c])) for c in range(k) if c != j} | used
        far = next((int(i) for i in order if int(i) not in taken), None)
        if far is None:
            far = next(int(i) for i in order if int(i) not in used)
        reseeded[j] = far
    return reseeded


def _assign(x: FloatArray, centroids: FloatArray, spec: ManifoldSpec) -> FloatArray:
    return _finite(cross_distances(x, centroids, spec).values)


def _run(
    x: FloatArray,
    pairwise: FloatArray,
    spec: ManifoldSpec,
    k: int,
    rng: np.random.Generator,
    max_iter: int,
) -> ClusteringResult:
    centroids = x[_seed(pairwise, k, rng)].copy()
    labels = np.full(len(x), -1)
    history: list[float] = []
    reseeds = 0
    n_iter = 0
    d = np.zeros((len(x), k))

    for n_iter in range(1, max_iter + 1):
        d = _assign(x, centroids, spec)
        new_labels = np.argmin(d, axis=1)
        nearest = d[np.arange(len(x)), new_labels]
        history.append(float(np.sum(nearest**2)))
        logger.info(
            "kmeans on %s: iteration %d, objective %.6g", spec.name, n_iter, history[-1]
        )
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j, far in _reseed_points(labels, d, nearest, k).items():
            logger.warning(
                "kmeans on %s: cluster %d is empty; reseeding at point %d",
                spec.name,
                j,
                far,
            )
            centroids[j] = x[far]
            reseeds += 1
        for j in range(k):
            members = np.flatnonzero(labels == j)
            if members.size:
                centroids[j] = karcher_mean(x[members], spec, initial=centroids[j])
    else:
        # out of iterations: labels must still match the final centroids
        d = _assign(x, centroids, spec)
        labels = np.argmin(d, axis=1)

    nearest = d[np.arange(len(x)), labels]
    return ClusteringResult(
        centroids=centroids,
        labels=labels.astype(np.int64),
        inertia=float(np.sum(nearest**2)),
        distance_sum=float(np.sum(nearest)),
        n_iter=n_iter,
        history=tuple(history),
        reseeds=reseeds,
    )


def riemannian_kmeans(
    points: object,
    spec: ManifoldSpec,
    k: int,
    seed: RandomState = None,
    max_iter: int = 100,
    n_init: int = 1,
) -> ClusteringResult:
    """Cluster ``points`` into ``k`` groups under the geodesic distance.

    Runs ``n_init`` seeded restarts and keeps the lowest objective. Each run
    alternates nearest-centroid assignment with Karcher-mean updates until
    the assignment stops changing or ``max_iter`` is reached. Results are
    deterministic for a given ``seed``.
    """
    x = as_points(points, spec.dim)
    if not 1 <= k <= len(x):
        raise DomainError(f"k must lie in [1, {len(x)}], got {k}")
    if max_iter < 1 or n_init < 1:
        raise DomainError("max_iter and n_init must be positive")
    rng = as_generator(seed)
    pairwise = pairwise_distances(x, spec).values

    best: ClusteringResult | None = None
    for _ in range(n_init):
        result = _run(x, pairwise, spec, k, rng, max_iter)
        if best is None or result.inertia < best.inertia:
            best = result
    assert best is not None
    return best
