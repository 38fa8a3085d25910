"""Tests for distance matrices, Karcher means, k-means and k-NN."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fisher_rao.exceptions import (
    DimensionMismatchError,
    DomainError,
    NonConvergenceError,
)
from fisher_rao.families import Beta, Dirichlet, Exponential, Gamma, Normal
from fisher_rao.families.gamma import scale_to_natural
from fisher_rao.geometry import euclidean_spec
from fisher_rao.learning import (
    MEAN_LINE_VALUES,
    cross_distances,
    karcher_mean,
    knn_classify,
    knn_error_curve,
    knn_from_distances,
    mean_lines_dataset,
    pairwise_distances,
    riemannian_kmeans,
    stratified_split,
    synthetic_dirichlet_classes,
)
from fisher_rao.learning.clustering import _reseed_points


@pytest.fixture()
def exponential_spec():
    return Exponential().spec


@pytest.fixture()
def normal_points(rng):
    return np.array(Normal().random_point(rng, count=12))


class TestDistanceMatrices:
    """Pairwise and cross distance matrices."""

    def test_single_point(self, exponential_spec):
        matrix = pairwise_distances([[1.0]], exponential_spec)
        np.testing.assert_array_equal(matrix.values, [[0.0]])
        assert matrix.ok

    def test_exponential_pair(self, exponential_spec):
        matrix = pairwise_distances([[0.1], [2.0]], exponential_spec)
        assert matrix.values[0, 1] == pytest.approx(math.log(20.0))
        np.testing.assert_array_equal(matrix.values, matrix.values.T)
        np.testing.assert_array_equal(np.diag(matrix.values), 0.0)

    def test_matches_family_distance(self, normal_points):
        family = Normal()
        matrix = pairwise_distances(normal_points, family.spec)
        assert matrix.failed == ()
        assert matrix.values[2, 7] == pytest.approx(
            family.dist(normal_points[2], normal_points[7]), rel=1e-12
        )

    def test_workers_give_same_values(self, normal_points):
        spec = Normal().spec
        serial = pairwise_distances(normal_points, spec, workers=1).values
        threaded = pairwise_distances(normal_points, spec, workers=3).values
        np.testing.assert_allclose(threaded, serial, rtol=1e-12)

    def test_cross_shape(self, normal_points):
        spec = Normal().spec
        matrix = cross_distances(normal_points[:3], normal_points[3:], spec)
        assert matrix.values.shape == (3, 9)
        full = pairwise_distances(normal_points, spec).values
        np.testing.assert_allclose(matrix.values, full[:3, 3:], rtol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            pairwise_distances(np.ones((3, 3)), Normal().spec)


class TestKarcherMean:
    """Riemannian gradient descent for the Frechet mean."""

    def test_single_point(self, exponential_spec):
        np.testing.assert_array_equal(karcher_mean([[3.0]], exponential_spec), [3.0])

    def test_geometric_mean(self, exponential_spec):
        mean = karcher_mean([[0.5], [2.0], [8.0]], exponential_spec, tol=1e-10)
        assert mean[0] == pytest.approx(2.0, rel=1e-8)

    def test_two_points_give_midpoint(self):
        family = Normal()
        a, b = np.array([1.0, 1.0]), np.array([4.0, 2.0])
        mean = karcher_mean([a, b], family.spec, tol=1e-10)
        np.testing.assert_allclose(mean, family.interpolate(a, b, 0.5), atol=1e-5)

    def test_stationary(self, normal_points):
        family = Normal()
        mean = karcher_mean(normal_points, family.spec, tol=1e-8)
        grad = np.sum([family.log(x, mean) for x in normal_points], axis=0)
        assert family.norm(grad, mean) <= 1e-8 * len(normal_points)

    def test_nonconvergence_carries_iterate(self, normal_points):
        with pytest.raises(NonConvergenceError) as info:
            karcher_mean(normal_points, Normal().spec, max_iter=0)
        assert info.value.residual > 0
        assert info.value.iterate.shape == (2,)

    def test_needs_points(self, exponential_spec):
        with pytest.raises(DomainError, match="at least one point"):
            karcher_mean(np.zeros((0, 1)), exponential_spec)

    def test_rejects_points_outside(self, exponential_spec):
        with pytest.raises(DomainError):
            karcher_mean([[1.0], [-1.0]], exponential_spec)


class TestKMeans:
    """Riemannian k-means with k-means++ seeding."""

    def test_every_point_its_own_cluster(self, exponential_spec):
        points = [[0.5], [1.0], [2.0], [4.0], [8.0]]
        result = riemannian_kmeans(points, exponential_spec, 5, seed=0)
        assert result.inertia == pytest.approx(0.0, abs=1e-20)
        assert sorted(result.labels.tolist()) == [0, 1, 2, 3, 4]

    def test_labels_are_nearest_centroids(self, normal_points):
        spec = Normal().spec
        result = riemannian_kmeans(normal_points, spec, 3, seed=4)
        d = cross_distances(normal_points, result.centroids, spec).values
        np.testing.assert_array_equal(result.labels, np.argmin(d, axis=1))
        assert result.inertia == pytest.approx(
            float(np.sum(np.min(d, axis=1) ** 2)), rel=1e-10
        )

    def test_objective_non_increasing(self, normal_points):
        result = riemannian_kmeans(normal_points, Normal().spec, 3, seed=1)
        if result.reseeds == 0:
            steps = np.diff(result.history)
            assert np.all(steps <= 1e-9 * max(result.history))

    def test_deterministic(self, normal_points):
        spec = Normal().spec
        first = riemannian_kmeans(normal_points, spec, 3, seed=9)
        second = riemannian_kmeans(normal_points, spec, 3, seed=9)
        np.testing.assert_array_equal(first.labels, second.labels)
        np.testing.assert_array_equal(first.centroids, second.centroids)

    def test_empty_clusters_get_distinct_points(self):
        d = np.array(
            [[0.1, 5.0, 5.0], [0.2, 5.0, 5.0], [3.0, 6.0, 6.0], [2.0, 7.0, 7.0]]
        )
        labels = np.zeros(4, dtype=np.int64)
        reseeded = _reseed_points(labels, d, d[:, 0], 3)
        assert reseeded == {1: 2, 2: 3}

    def test_reseed_with_no_free_points(self):
        d = np.array([[0.1, 5.0, 0.1], [0.2, 0.1, 5.0], [3.0, 6.0, 6.0]])
        labels = np.zeros(3, dtype=np.int64)
        reseeded = _reseed_points(labels, d, d[:, 0], 3)
        assert reseeded == {1: 2, 2: 1}

    def test_rejects_k(self, exponential_spec):
        with pytest.raises(DomainError, match="k must lie"):
            riemannian_kmeans([[1.0], [2.0]], exponential_spec, 3)
        with pytest.raises(DomainError, match="k must lie"):
            riemannian_kmeans([[1.0], [2.0]], exponential_spec, 0)

    def test_euclidean_mixes_mean_lines(self):
        points, lines = mean_lines_dataset()
        result = riemannian_kmeans(points, euclidean_spec(2), 4, seed=0, n_init=5)
        mixed = [len(set(lines[result.labels == c])) > 1 for c in range(4)]
        assert any(mixed)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(10))
    def test_fisher_rao_separates_mean_lines(self, seed):
        points, lines = mean_lines_dataset()
        result = riemannian_kmeans(points, Beta().spec, 4, seed=seed)
        for c in range(4):
            assert len(set(lines[result.labels == c])) <= 1


class TestKnn:
    """Voting, splits and error curves."""

    def test_majority(self):
        d = [[0.5, 1.0, 0.9]]
        assert knn_from_distances(d, [1, 0, 0], 3).tolist() == [0]

    def test_tie_goes_to_smaller_distance_sum(self):
        d = [[0.2, 0.5, 0.6, 0.3]]
        assert knn_from_distances(d, [1, 1, 0, 0], 4).tolist() == [1]

    def test_full_tie_goes_to_lower_label(self):
        d = [[1.0, 1.0, 3.0]]
        assert knn_from_distances(d, [1, 0, 0], 2).tolist() == [0]

    def test_nan_is_far(self):
        d = [[np.nan, 2.0, 3.0]]
        assert knn_from_distances(d, [0, 1, 1], 1).tolist() == [1]

    def test_validation(self):
        with pytest.raises(DimensionMismatchError):
            knn_from_distances([[1.0, 2.0]], [0, 1, 1], 1)
        with pytest.raises(DomainError, match="k must lie"):
            knn_from_distances([[1.0, 2.0]], [0, 1], 3)
        with pytest.raises(DomainError, match="integers"):
            knn_from_distances([[1.0, 2.0]], [0.5, 1], 1)

    def test_exact_match(self, exponential_spec):
        train = [[0.5], [1.0], [4.0]]
        predicted = knn_classify(train, [2, 0, 1], [[1.0], [4.0]], exponential_spec, 1)
        assert predicted.tolist() == [0, 1]

    def test_constant_training_labels(self, exponential_spec):
        train = [[0.5], [1.0], [4.0]]
        predicted = knn_classify(train, [3, 3, 3], [[0.1], [9.0]], exponential_spec, 2)
        assert predicted.tolist() == [3, 3]

    def test_invariant_under_chart_change(self, rng):
        family = Gamma()
        train = np.array(family.random_point(rng, count=6))
        test = np.array(family.random_point(rng, count=3))
        labels = [0, 0, 0, 1, 1, 1]
        scale = knn_classify(train, labels, test, family.spec, 3)
        natural = knn_classify(
            scale_to_natural(train),
            labels,
            scale_to_natural(test),
            family.natural_spec(),
            3,
        )
        np.testing.assert_array_equal(scale, natural)

    def test_stratified_split(self, rng):
        labels = np.array([0] * 4 + [1] * 6)
        train, test = stratified_split(labels, 0.5, rng)
        assert np.bincount(labels[train]).tolist() == [2, 3]
        assert sorted(train.tolist() + test.tolist()) == list(range(10))
        with pytest.raises(DomainError, match="fraction"):
            stratified_split(labels, 1.0, rng)

    def test_error_curve_on_separated_classes(self):
        x = np.concatenate([np.linspace(0, 1, 10), np.linspace(10, 11, 10)])
        d = np.abs(x[:, None] - x[None, :])
        labels = np.repeat([0, 1], 10)
        curve = knn_error_curve(d, labels, seeds=range(5), k=3)
        assert len(curve.fractions) == 7
        np.testing.assert_array_equal(curve.errors, 0.0)
        assert curve.spread.shape == (7,)

    @pytest.mark.slow
    def test_fisher_rao_beats_euclidean(self):
        points, labels = synthetic_dirichlet_classes(2, 8, 10, seed=0)
        fisher = pairwise_distances(points, Dirichlet(10).spec).values
        euclid = pairwise_distances(points, euclidean_spec(10)).values
        kwargs = {"seeds": range(10), "k": 3}
        fisher_curve = knn_error_curve(fisher, labels, **kwargs)
        euclid_curve = knn_error_curve(euclid, labels, **kwargs)
        assert fisher_curve.errors.mean() <= euclid_curve.errors.mean()


class TestDatasets:
    """Synthetic experiment inputs."""

    def test_mean_lines(self):
        points, lines = mean_lines_dataset()
        n = len(MEAN_LINE_VALUES)
        assert points.shape == (2 * n, 2)
        np.testing.assert_allclose(points[:n, 1] / points[:n, 0], 5.0)
        np.testing.assert_allclose(points[n:, 0] / points[n:, 1], 5.0)
        assert lines.tolist() == [0] * n + [1] * n

    def test_mean_lines_rejects(self):
        with pytest.raises(DomainError):
            mean_lines_dataset(values=[1.0, -2.0])

    def test_dirichlet_classes(self):
        points, labels = synthetic_dirichlet_classes(4, 5, 10, seed=3)
        assert points.shape == (20, 10)
        assert np.all(points > 0)
        assert np.bincount(labels).tolist() == [5, 5, 5, 5]
        again, _ = synthetic_dirichlet_classes(4, 5, 10, seed=3)
        np.testing.assert_array_equal(points, again)

    def test_dirichlet_classes_rejects(self):
        with pytest.raises(DomainError):
            synthetic_dirichlet_classes(n_classes=5, dim=3)
