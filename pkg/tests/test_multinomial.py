"""Tests for the multinomial and categorical families."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fisher_rao import geometry
from fisher_rao.exceptions import (
    DimensionMismatchError,
    DomainError,
    TangencyError,
    UndefinedCurvatureError,
)
from fisher_rao.families import Categorical, Multinomial

POINT_A = [0.1, 0.2, 0.1, 0.3, 0.15, 0.15]
POINT_B = [0.25, 0.25, 0.1, 0.05, 0.05, 0.3]


def _vertices(k):
    return [np.eye(k)[i] for i in range(k)]


class TestDistance:
    """Great-circle distances on the sphere image."""

    @pytest.mark.parametrize(
        ("point", "expected"),
        [
            (POINT_A, [2.498, 2.214, 2.498, 1.982, 2.346, 2.346]),
            (POINT_B, [2.094, 2.094, 2.498, 2.69, 2.69, 1.982]),
        ],
        ids=["point-a", "point-b"],
    )
    def test_distances_to_vertices(self, point, expected):
        family = Categorical(6)
        got = [family.dist(point, vertex) for vertex in _vertices(6)]
        np.testing.assert_allclose(got, expected, atol=5e-3)

    def test_closest_vertex(self):
        family = Categorical(6)
        got = [family.dist(POINT_B, vertex) for vertex in _vertices(6)]
        assert int(np.argmin(got)) == 5

    def test_vertex_formula(self):
        family = Multinomial(4, 3)
        theta = np.array([0.1, 0.2, 0.3, 0.4])
        for i, vertex in enumerate(_vertices(4)):
            expected = 2.0 * math.sqrt(3) * math.acos(math.sqrt(theta[i]))
            assert family.dist(theta, vertex) == pytest.approx(expected, abs=1e-12)

    def test_sphere_arc(self, rng):
        family = Multinomial(5, 2)
        a, b = family.random_point(rng, count=2)
        ra, rb = family.sphere_map(a), family.sphere_map(b)
        angle = math.acos(float(ra @ rb) / (4.0 * 2))
        assert family.dist(a, b) == pytest.approx(2.0 * math.sqrt(2) * angle, abs=1e-12)

    def test_identical_points(self):
        assert Categorical(3).dist([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0.0

    def test_numeric_shooting_agrees(self):
        family = Categorical(3)
        a, b = [0.2, 0.3, 0.5], [0.6, 0.3, 0.1]
        numeric = geometry.dist(
            family.to_coordinates(a),
            family.to_coordinates(b),
            family.spec.without_closed_forms(),
        )
        assert numeric == pytest.approx(family.dist(a, b), rel=1e-6)

    def test_metric_axioms(self, rng):
        family = Categorical(4)
        points = family.random_point(rng, count=12)
        for x, y, z in zip(points[0::3], points[1::3], points[2::3]):
            assert family.dist(x, y) == pytest.approx(family.dist(y, x), abs=1e-12)
            assert family.dist(x, z) <= family.dist(x, y) + family.dist(y, z) + 1e-9


class TestMetric:
    """The metric on the tangent space of the simplex."""

    def test_two_categories(self):
        family = Categorical(2)
        assert family.inner_product([1.0, -1.0], [1.0, -1.0], [0.5, 0.5]) == 4.0

    def test_scales_with_trials(self):
        theta = [0.2, 0.5, 0.3]
        np.testing.assert_allclose(
            Multinomial(3, 5).metric_matrix(theta),
            5.0 * Multinomial(3, 1).metric_matrix(theta),
        )

    def test_positive_definite(self, rng):
        family = Categorical(5)
        for point in family.random_point(rng, count=5):
            assert np.all(np.linalg.eigvalsh(family.metric_matrix(point)) > 0)

    def test_tangent_must_sum_to_zero(self):
        with pytest.raises(TangencyError, match="does not sum to 0"):
            Categorical(3).inner_product(
                [1.0, 0.0, 0.0], [1.0, -1.0, 0.0], [0.2, 0.3, 0.5]
            )

    def test_full_tangent_equals_chart_tangent(self):
        family = Categorical(3)
        point = [0.2, 0.3, 0.5]
        full = family.inner_product([0.1, 0.2, -0.3], [0.1, 0.2, -0.3], point)
        chart = family.inner_product([0.1, 0.2], [0.1, 0.2], point)
        assert full == pytest.approx(chart)

    def test_christoffels_match_numeric(self):
        family = Categorical(3)
        x = family.to_coordinates([0.2, 0.3, 0.5])
        numeric = geometry.christoffels(family.spec.without_closed_forms(), x)
        closed = family.christoffels([0.2, 0.3, 0.5])
        np.testing.assert_allclose(closed, numeric, atol=1e-6)


class TestSphereMap:
    """The isometry onto the sphere of radius 2 sqrt(n)."""

    def test_uniform(self):
        np.testing.assert_allclose(Categorical(4).sphere_map([0.25] * 4), [1.0] * 4)

    def test_round_trip_and_norm(self, rng):
        family = Multinomial(4, 3)
        theta = family.random_point(rng)
        r = family.sphere_map(theta)
        assert float(r @ r) == pytest.approx(12.0, abs=1e-12)
        np.testing.assert_allclose(family.sphere_inverse(r), theta, atol=1e-14)

    def test_inverse_rejects_nonpositive(self):
        with pytest.raises(DomainError, match="nonpositive"):
            Categorical(3).sphere_inverse([1.0, 0.0, 1.0])

    def test_pushforward_is_isometric(self):
        family = Multinomial(3, 2)
        point, u = [0.2, 0.3, 0.5], [0.1, 0.2, -0.3]
        w = family.sphere_pushforward(u, point)
        expected = family.inner_product(u, u, point)
        assert float(w @ w) == pytest.approx(expected, rel=1e-10)


class TestGeodesics:
    """Slerp geodesics and the maps built on them."""

    def test_interpolate_endpoints(self):
        family = Categorical(3)
        a, b = [0.2, 0.3, 0.5], [0.6, 0.3, 0.1]
        np.testing.assert_allclose(family.interpolate(a, b, 0.0), a, atol=1e-15)
        np.testing.assert_allclose(family.interpolate(a, b, 1.0), b, atol=1e-15)
        np.testing.assert_allclose(family.interpolate(a, a, 0.4), a)

    def test_path_matches_interpolation(self):
        family = Multinomial(3, 4)
        a, b = [0.2, 0.3, 0.5], [0.6, 0.3, 0.1]
        path = family.geodesic(a, b, 10)
        assert path.points.shape == (11, 3)
        for t, point in zip(path.times, path.points):
            np.testing.assert_allclose(point, family.interpolate(a, b, t), atol=1e-12)
        assert path.length == pytest.approx(family.dist(a, b), rel=1e-10)
        np.testing.assert_allclose(path.speeds, path.length, rtol=1e-10)

    def test_discretized_length(self):
        family = Categorical(4)
        a, b = [0.1, 0.2, 0.3, 0.4], [0.4, 0.3, 0.2, 0.1]
        ts = np.linspace(0.0, 1.0, 401)
        points = [family.interpolate(a, b, t) for t in ts]
        length = sum(family.dist(p, q) for p, q in zip(points, points[1:]))
        assert length == pytest.approx(family.dist(a, b), rel=1e-5)

    def test_stays_inside(self):
        path = Categorical(3).geodesic([0.01, 0.01, 0.98], [0.98, 0.01, 0.01], 100)
        assert path.points.min() > 0.0

    def test_exp_log(self):
        family = Categorical(3)
        a, b = [0.2, 0.3, 0.5], [0.6, 0.3, 0.1]
        v = family.log(b, a)
        assert v.shape == (3,)
        assert abs(v.sum()) < 1e-12
        np.testing.assert_allclose(family.exp(v, a), b, atol=1e-12)
        assert family.norm(v, a) == pytest.approx(family.dist(a, b))

    def test_rejects_t(self):
        with pytest.raises(DomainError, match="t must lie"):
            Categorical(3).interpolate([0.2, 0.3, 0.5], [0.6, 0.3, 0.1], -0.1)


class TestCurvature:
    """Constant curvature 1/(4n)."""

    def test_constant_value(self):
        assert Categorical(3).sectional_curvature() == 0.25
        assert Multinomial(3, 4).sectional_curvature() == 1.0 / 16.0

    def test_numeric_tensor_agrees(self, rng):
        family = Categorical(3)
        values = [
            family.numeric_sectional_curvature(p) for p in family.random_point(rng, 4)
        ]
        np.testing.assert_allclose(values, 0.25, atol=1e-4)

    def test_needs_two_dimensions(self):
        with pytest.raises(UndefinedCurvatureError):
            Categorical(2).sectional_curvature()


class TestStatistics:
    """Probability mass function and sampling."""

    def test_pmf_values(self):
        assert Categorical(2).pmf([0.3, 0.7], [1, 0]) == pytest.approx(0.3)
        assert Multinomial(3, 2).pmf([1 / 3] * 3, [1, 1, 0]) == pytest.approx(2 / 9)

    def test_pmf_normalizes(self):
        family = Multinomial(3, 3)
        theta = [0.2, 0.5, 0.3]
        total = sum(
            family.pmf(theta, [i, j, 3 - i - j]) for i in range(4) for j in range(4 - i)
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_pdf_closure(self):
        density = Multinomial(3, 2).pdf([0.2, 0.5, 0.3])
        assert density([0, 2, 0]) == pytest.approx(0.25)

    def test_invalid_counts(self):
        with pytest.raises(DomainError, match="summing to 2"):
            Multinomial(3, 2).pmf([0.2, 0.5, 0.3], [1, 0, 0])
        with pytest.raises(DimensionMismatchError):
            Multinomial(3, 2).pmf([0.2, 0.5, 0.3], [1, 1])

    def test_one_hot_samples(self, rng):
        draws = Categorical(4).sample([0.1, 0.2, 0.3, 0.4], 50, rng=rng)
        assert draws.shape == (50, 4)
        np.testing.assert_array_equal(draws.sum(axis=1), 1.0)

    def test_frequencies(self, rng):
        theta = np.array([0.1, 0.2, 0.3, 0.4])
        draws = Categorical(4).sample(theta, 100_000, rng=rng)
        freq = draws.mean(axis=0)
        bound = 5.0 * np.sqrt(theta * (1 - theta) / 100_000)
        assert np.all(np.abs(freq - theta) < bound)

    def test_concentrated(self, rng):
        eps = 1e-6
        draws = Multinomial(3, 10).sample([1 - 2 * eps, eps, eps], 20, rng=rng)
        assert draws[:, 0].mean() > 9.9


class TestValidation:
    """Simplex checks."""

    def test_must_sum_to_one(self):
        with pytest.raises(DomainError, match="does not sum to 1"):
            Categorical(3).metric_matrix([0.2, 0.2, 0.2])

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatchError, match="3 probabilities"):
            Categorical(3).metric_matrix([0.5, 0.5])

    def test_vertices_only_for_distances(self):
        family = Categorical(3)
        assert family.dist([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(math.pi)
        with pytest.raises(DomainError, match="open simplex"):
            family.metric_matrix([1.0, 0.0, 0.0])
        assert not family.belongs([1.0, 0.0, 0.0])

    def test_options(self):
        with pytest.raises(DomainError, match="k >= 2"):
            Multinomial(1)
        with pytest.raises(DomainError, match="positive integer"):
            Multinomial(3, 0)
        assert Multinomial(3, 2).name == "multinomial(k=3, n=2)"
        assert Categorical(4).dim == 3
