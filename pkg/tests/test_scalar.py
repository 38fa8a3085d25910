"""Tests for the one-parameter families."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fisher_rao import geometry
from fisher_rao.exceptions import (
    DomainError,
    FamilyMismatchError,
    InfiniteDistanceError,
    UndefinedCurvatureError,
)
from fisher_rao.families import Bernoulli, Binomial, Exponential, Geometric, Poisson

FAMILIES = {
    "poisson": (Poisson, (1.0, 4.0)),
    "exponential": (Exponential, (0.1, 2.0)),
    "binomial": (lambda: Binomial(5), (0.4, 0.7)),
    "bernoulli": (Bernoulli, (0.2, 0.9)),
    "geometric": (Geometric, (0.3, 0.6)),
}


@pytest.fixture(params=sorted(FAMILIES), ids=sorted(FAMILIES))
def family_and_pair(request):
    factory, pair = FAMILIES[request.param]
    return factory(), pair


class TestFisherInformation:
    """Closed-form information and Christoffel symbols."""

    @pytest.mark.parametrize(
        ("family", "theta", "expected"),
        [
            (Geometric(), 0.5, 8.0),
            (Exponential(), 2.0, 0.25),
            (Binomial(5), 0.5, 20.0),
            (Bernoulli(), 0.5, 4.0),
            (Poisson(), 4.0, 0.25),
        ],
        ids=["geometric", "exponential", "binomial", "bernoulli", "poisson"],
    )
    def test_values(self, family, theta, expected):
        assert family.fisher_information(theta) == pytest.approx(expected)
        np.testing.assert_allclose(family.metric_matrix(theta), [[expected]])

    def test_exponential_christoffel(self):
        np.testing.assert_allclose(Exponential().christoffels(2.0), [[[-0.5]]])

    def test_christoffels_match_numeric(self, family_and_pair):
        family, (a, _) = family_and_pair
        numeric = geometry.christoffels(family.spec.without_closed_forms(), [a])
        np.testing.assert_allclose(family.christoffels(a), numeric, rtol=1e-6)


class TestArclength:
    """The coordinate in which each metric is Euclidean."""

    def test_geometric_round_trip(self):
        family = Geometric()
        phi = family.arclength_coord(0.3)
        assert family.arclength_inverse(phi) == pytest.approx(0.3, abs=1e-12)

    def test_poisson(self):
        family = Poisson()
        assert abs(family.arclength_coord(1.0) - family.arclength_coord(4.0)) == 2.0

    def test_binomial(self):
        family = Binomial(5)
        gap = family.arclength_coord(0.7) - family.arclength_coord(0.4)
        assert gap == pytest.approx(1.37043, abs=1e-5)

    def test_vectorized(self):
        np.testing.assert_allclose(Exponential().arclength_coord([1.0, math.e]), [0, 1])

    def test_inverse_range(self):
        with pytest.raises(DomainError, match="outside"):
            Poisson().arclength_inverse(-1.0)
        with pytest.raises(DomainError, match="outside"):
            Geometric().arclength_inverse(0.5)


class TestDistance:
    """Distances, including parameters on the closed boundary."""

    @pytest.mark.parametrize(
        ("family", "a", "b", "expected"),
        [
            (Poisson(), 1.0, 4.0, 2.0),
            (Exponential(), 0.1, 2.0, math.log(20.0)),
            (Binomial(5), 0.4, 0.7, 1.37043),
            (Geometric(), 0.5, 0.5, 0.0),
        ],
        ids=["poisson", "exponential", "binomial", "geometric-same"],
    )
    def test_known_distances(self, family, a, b, expected):
        assert family.dist(a, b) == pytest.approx(expected, abs=1e-5)
        assert family.dist(b, a) == family.dist(a, b)

    def test_exponential_golden(self):
        assert Exponential().dist(0.1, 2.0) == pytest.approx(2.99573, abs=1e-5)

    def test_numeric_shooting_agrees(self, family_and_pair):
        family, (a, b) = family_and_pair
        numeric = geometry.dist([a], [b], family.spec.without_closed_forms())
        assert numeric == pytest.approx(family.dist(a, b), rel=1e-6)

    def test_boundary_points(self):
        assert Poisson().dist(0.0, 4.0) == pytest.approx(4.0)
        assert Binomial(5).dist(0.0, 1.0) == pytest.approx(math.pi * math.sqrt(5))
        expected = 2.0 * math.atanh(math.sqrt(0.5))
        assert Geometric().dist(1.0, 0.5) == pytest.approx(expected)

    def test_infinite_distance(self):
        with pytest.raises(InfiniteDistanceError, match="diverges"):
            Exponential().dist(0.0, 1.0)
        with pytest.raises(InfiniteDistanceError):
            Geometric().dist(0.5, 0.0)

    def test_outside_range(self):
        with pytest.raises(DomainError, match="outside"):
            Binomial(5).dist(0.5, 1.5)
        with pytest.raises(DomainError):
            Poisson().dist(-1.0, 1.0)

    def test_family_mismatch(self):
        with pytest.raises(FamilyMismatchError):
            Poisson().dist(Poisson(), 1.0)


class TestGeodesics:
    """Interpolation in the arclength coordinate."""

    def test_binomial_midpoint(self):
        mid = Binomial(5).interpolate(0.4, 0.7, 0.5)
        assert mid == pytest.approx(0.55254, abs=1e-5)
        # differs from the affine midpoint
        assert mid > 0.55

    def test_endpoints(self):
        family = Binomial(5)
        assert family.interpolate(0.4, 0.7, 0.0) == 0.4
        assert family.interpolate(0.4, 0.7, 1.0) == 0.7

    def test_exponential_geometric_mean(self):
        mid = Exponential().interpolate(0.1, 2.0, 0.5)
        assert mid == pytest.approx(math.sqrt(0.2))

    def test_symmetry(self):
        family = Bernoulli()
        for t in (0.1, 0.3, 0.5):
            assert family.interpolate(0.2, 0.9, t) == pytest.approx(
                family.interpolate(0.9, 0.2, 1.0 - t), abs=1e-15
            )

    def test_rejects_t(self):
        with pytest.raises(DomainError, match="t must lie"):
            Poisson().interpolate(1.0, 2.0, 1.5)

    def test_sampled_geodesic(self):
        path = Binomial(5).geodesic(0.4, 0.7, 100)
        assert path.points.shape == (101, 1)
        assert path.points[50, 0] == pytest.approx(0.55254, abs=1e-5)
        assert path.points[0, 0] == 0.4
        assert path.points[-1, 0] == 0.7
        np.testing.assert_allclose(path.speeds, path.length, rtol=1e-4)
        assert path.length == pytest.approx(1.37043, abs=1e-5)

    def test_exp_log(self):
        family = Exponential()
        assert family.exp(1.0, 1.0) == pytest.approx(math.e)
        assert family.log(math.e, 1.0) == pytest.approx(1.0)
        assert family.exp(0.0, 3.0) == pytest.approx(3.0)

    def test_exp_log_inverse(self, family_and_pair):
        family, (a, b) = family_and_pair
        v = family.log(b, a)
        assert family.exp(v, a) == pytest.approx(b, rel=1e-10)

    def test_parallel_transport_keeps_norm(self, family_and_pair):
        family, (a, b) = family_and_pair
        path = family.geodesic(a, b, 10)
        moved = family.parallel_transport(1.0, path)
        assert family.norm(moved, b) == pytest.approx(family.norm(1.0, a), rel=1e-6)

    def test_no_sectional_curvature(self):
        with pytest.raises(UndefinedCurvatureError):
            Poisson().sectional_curvature(1.0)


class TestStatistics:
    """Densities and samplers."""

    @pytest.mark.parametrize(
        ("family", "theta", "k", "expected"),
        [
            (Poisson(), 1.0, 0, math.exp(-1.0)),
            (Poisson(), 2.0, 3, math.exp(-2.0) * 8 / 6),
            (Bernoulli(), 0.5, 1, 0.5),
            (Geometric(), 0.5, 1, 0.5),
            (Geometric(), 0.5, 3, 0.125),
            (Binomial(5), 0.4, 2, 0.3456),
            (Exponential(), 2.0, 0.5, 2.0 * math.exp(-1.0)),
        ],
        ids=[
            "poisson-0",
            "poisson-3",
            "bernoulli",
            "geometric-1",
            "geometric-3",
            "binomial",
            "exponential",
        ],
    )
    def test_density(self, family, theta, k, expected):
        assert family.pdf(theta)(k) == pytest.approx(expected, rel=1e-12)

    def test_density_outside_support(self):
        with pytest.raises(DomainError, match="sample space"):
            Poisson().density(1.0, -1)
        with pytest.raises(DomainError):
            Binomial(3).density(0.5, 4)
        with pytest.raises(DomainError):
            Geometric().density(0.5, 0)

    def test_exponential_sample_mean(self, rng):
        draws = Exponential().sample(2.0, 100_000, rng=rng)
        assert draws.shape == (100_000,)
        assert abs(draws.mean() - 0.5) < 5 * 0.5 / math.sqrt(100_000)

    def test_poisson_sample_variance(self, rng):
        draws = Poisson().sample(4.0, 100_000, rng=rng)
        assert abs(draws.var() - 4.0) < 0.1

    def test_nearly_certain_bernoulli(self, rng):
        draws = Bernoulli().sample(1.0 - 1e-9, 1000, rng=rng)
        assert draws.mean() > 0.99

    def test_seeded_sampling_is_deterministic(self):
        a = Geometric().sample(0.3, 20, rng=7)
        b = Geometric().sample(0.3, 20, rng=7)
        np.testing.assert_array_equal(a, b)

    def test_count_must_be_positive(self):
        with pytest.raises(DomainError, match="count"):
            Poisson().sample(1.0, 0)

    def test_random_point(self, rng):
        points = Binomial(4).random_point(rng, count=5)
        assert len(points) == 5
        assert all(0.05 <= p <= 0.95 for p in points)


class TestConstruction:
    """Family options and naming."""

    def test_binomial_needs_trials(self):
        with pytest.raises(DomainError, match="positive integer"):
            Binomial(0)
        with pytest.raises(DomainError):
            Binomial(2.5)

    def test_names(self):
        assert Binomial(5).name == "binomial(n=5)"
        assert Bernoulli().name == "bernoulli"
        assert Bernoulli().n == 1

    def test_open_chart(self):
        assert Poisson().belongs(2.0)
        assert not Poisson().belongs(0.0)
        assert not Bernoulli().belongs(1.0)
