"""K-nearest-neighbour classification under a manifold distance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from fisher_rao._types import FloatArray, IntArray
from fisher_rao.exceptions import DimensionMismatchError, DomainError
from fisher_rao.geometry import ManifoldSpec
from fisher_rao.learning.distances import cross_distances

__all__ = [
    "ErrorCurve",
    "knn_classify",
    "knn_error_curve",
    "knn_from_distances",
    "stratified_split",
]

DEFAULT_FRACTIONS = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


def _labels(labels: object) -> IntArray:
    arr = np.asarray(labels)
    if arr.ndim != 1 or (arr.size and not np.all(np.floor(arr) == arr)):
        raise DomainError("labels must be a 1-D sequence of integers")
    arr = arr.astype(np.int64)
    if arr.size and arr.min() < 0:
        raise DomainError("labels must be non-negative")
    return arr


def _vote(distances: FloatArray, labels: IntArray) -> int:
    """Majority label; ties go to the smaller summed distance, then the lower label."""
    candidates = np.unique(labels)
    counts = np.array([np.sum(labels == c) for c in candidates])
    sums = np.array([np.sum(distances[labels == c]) for c in candidates])
    order = np.lexsort((candidates, sums, -counts))
    return int(candidates[order[0]])


def knn_from_distances(distances: object, labels: object, k: int) -> IntArray:
    """Predict from a precomputed ``(n_test, n_train)`` distance matrix.

    NaN distances count as infinitely far.
    """
    d = np.asarray(distances, dtype=np.float64)
    y = _labels(labels)
    if d.ndim != 2 or d.shape[1] != y.shape[0]:
        raise DimensionMismatchError(
            f"distance matrix {d.shape} does not match {y.shape[0]} training labels",
            expected=y.shape[0],
            actual=d.shape[-1],
        )
    if not 1 <= k <= y.shape[0]:
        raise DomainError(f"k must lie in [1, {y.shape[0]}], got {k}")
    d = np.where(np.isnan(d), np.inf, d)
    out = np.empty(d.shape[0], dtype=np.int64)
    for row in range(d.shape[0]):
        nearest = np.argsort(d[row], kind="stable")[:k]
        out[row] = _vote(d[row, nearest], y[nearest])
    return out


def knn_classify(
    train_points: object,
    train_labels: object,
    test_points: object,
    spec: ManifoldSpec,
    k: int,
    *,
    workers: int | None = None,
) -> IntArray:
    """Label each test point by majority vote among its ``k`` nearest train points."""
    d = cross_distances(test_points, train_points, spec, workers=workers).values
    return knn_from_distances(d, train_labels, k)


def stratified_split(
    labels: object, fraction: float, rng: np.random.Generator
) -> tuple[IntArray, IntArray]:
    """Train and test indices keeping ``fraction`` of every class for training.

    Every class keeps at least one training and, when it has two or more
    members, one test point.
    """
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"fraction must lie in (0, 1), got {fraction}")
    y = _labels(labels)
    train: list[int] = []
    test: list[int] = []
    for c in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == c))
        n_train = int(round(fraction * members.size))
        n_train = min(max(n_train, 1), max(members.size - 1, 1))
        train.extend(members[:n_train].tolist())
        test.extend(members[n_train:].tolist())
    return (
        np.array(sorted(train), dtype=np.int64),
        np.array(sorted(test), dtype=np.int64),
    )


@dataclass(frozen=True)
class ErrorCurve:
    """Mean k-NN test error per training fraction.

    Attributes:
        fractions: Training fractions.
        errors: Mean error over seeds, one entry per fraction.
        spread: Standard deviation over seeds.
    """

    fractions: tuple[float, ...]
    errors: FloatArray
    spread: FloatArray


def knn_error_curve(
    distances: object,
    labels: object,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seeds: Iterable[int] = range(20),
    k: int = 10,
) -> ErrorCurve:
    """Test error of k-NN on stratified random splits of one distance matrix.

    ``k`` is capped at the training-set size of each split.
    """
    d = np.asarray(distances, dtype=np.float64)
    y = _labels(labels)
    if d.shape != (y.size, y.size):
        raise DimensionMismatchError(
            f"distance matrix {d.shape} does not match {y.size} labels",
            expected=y.size,
            actual=d.shape[0],
        )
    seed_list = list(seeds)
    errors = np.zeros((len(fractions), len(seed_list)))
    for a, fraction in enumerate(fractions):
        for b, seed in enumerate(seed_list):
            train, test = stratified_split(y, fraction, np.random.default_rng(seed))
            if test.size == 0:
                continue
            predicted = knn_from_distances(
                d[np.ix_(test, train)], y[train], min(k, train.size)
            )
            errors[a, b] = float(np.mean(predicted != y[test]))
    return ErrorCurve(
        fractions=tuple(float(f) for f in fractions),
        errors=errors.mean(axis=1),
        spread=errors.std(axis=1),
    )
