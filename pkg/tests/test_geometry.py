"""Tests for the family-agnostic Riemannian engine.

Reference manifolds with textbook answers: the Poincare half-plane
(curvature -1), a round sphere in polar coordinates (curvature 1/r^2) and
flat space.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from fisher_rao import geometry
from fisher_rao.exceptions import (
    DegeneratePlaneError,
    DimensionMismatchError,
    DomainError,
    IncompleteGeodesicError,
    UndefinedCurvatureError,
)
from fisher_rao.geometry import ManifoldSpec, euclidean_spec

INF = math.inf


def _halfplane_metric(x):
    x = np.asarray(x)
    y = x[..., 1]
    g = np.zeros(x.shape[:-1] + (2, 2))
    g[..., 0, 0] = g[..., 1, 1] = 1.0 / y**2
    return g


def _halfplane_distance(a, b):
    (x1, y1), (x2, y2) = a, b
    return math.acosh(1.0 + ((x2 - x1) ** 2 + (y2 - y1) ** 2) / (2.0 * y1 * y2))


def _sphere_metric(radius):
    def metric(x):
        x = np.asarray(x)
        g = np.zeros(x.shape[:-1] + (2, 2))
        g[..., 0, 0] = radius**2
        g[..., 1, 1] = (radius * np.sin(x[..., 0])) ** 2
        return g

    return metric


@pytest.fixture()
def halfplane() -> ManifoldSpec:
    return ManifoldSpec(
        name="half-plane",
        dim=2,
        metric_matrix=_halfplane_metric,
        lower=(-INF, 0.0),
        upper=(INF, INF),
    )


@pytest.fixture()
def sphere() -> ManifoldSpec:
    return ManifoldSpec(
        name="sphere r=2",
        dim=2,
        metric_matrix=_sphere_metric(2.0),
        lower=(0.0, -INF),
        upper=(math.pi, INF),
    )


@pytest.fixture()
def segment() -> ManifoldSpec:
    """The open interval (0, 1) with the flat metric."""
    return ManifoldSpec(
        name="unit interval",
        dim=1,
        metric_matrix=lambda x: np.ones(np.shape(x)[:-1] + (1, 1)),
        lower=(0.0,),
        upper=(1.0,),
    )


class TestManifoldSpec:
    """Construction, membership and variants."""

    def test_rejects_zero_dimension(self):
        with pytest.raises(DomainError, match="dimension must be positive"):
            ManifoldSpec(name="empty", dim=0, metric_matrix=lambda x: x)

    def test_rejects_bound_length(self):
        with pytest.raises(DimensionMismatchError, match="lower bounds"):
            ManifoldSpec(name="bad", dim=2, metric_matrix=lambda x: x, lower=(0.0,))

    def test_contains_is_row_wise(self, halfplane):
        rows = np.array([[0.0, 1.0], [0.0, -1.0], [np.nan, 1.0], [3.0, 1e-9]])
        assert halfplane.contains(rows).tolist() == [True, False, False, False]

    def test_check_point(self, halfplane):
        np.testing.assert_array_equal(halfplane.check_point([1, 2]), [1.0, 2.0])
        with pytest.raises(DomainError, match="is not in half-plane"):
            halfplane.check_point([0.0, 0.0])
        with pytest.raises(DimensionMismatchError):
            halfplane.check_point([1.0, 2.0, 3.0])

    def test_anchor_is_inside(self, halfplane, sphere):
        assert halfplane.contains(halfplane.anchor())
        assert sphere.contains(sphere.anchor())

    def test_without_closed_forms(self):
        flat = euclidean_spec(2).without_closed_forms()
        assert flat.dist is None
        assert flat.christoffels is None
        assert flat.name.endswith("(numeric)")


class TestChristoffels:
    """Connection coefficients from the metric."""

    def test_halfplane_closed_form(self, halfplane):
        y = 2.0
        gamma = geometry.christoffels(halfplane, np.array([0.3, y]))
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 1] = expected[0, 1, 0] = -1.0 / y
        expected[1, 0, 0] = 1.0 / y
        expected[1, 1, 1] = -1.0 / y
        np.testing.assert_allclose(gamma, expected, atol=1e-8)

    def test_symmetric_in_lower_indices(self, sphere):
        gamma = geometry.christoffels(sphere, np.array([1.0, 0.2]))
        np.testing.assert_allclose(gamma, np.swapaxes(gamma, 1, 2))

    def test_flat_space(self):
        gamma = geometry.christoffels(euclidean_spec(3), np.zeros(3))
        assert gamma.shape == (3, 3, 3)
        assert not gamma.any()


class TestExpLog:
    """Exponential and logarithm maps by integration and shooting."""

    def test_log_inverts_exp(self, halfplane):
        x = np.array([0.0, 1.0])
        v = np.array([0.7, -0.4])
        y = geometry.exp(v, x, halfplane)
        np.testing.assert_allclose(geometry.log(y, x, halfplane), v, atol=1e-7)

    def test_distance_matches_formula(self, halfplane):
        a, b = np.array([0.0, 1.0]), np.array([3.0, 0.5])
        assert geometry.dist(a, b, halfplane) == pytest.approx(
            _halfplane_distance(a, b), rel=1e-7
        )

    def test_zero_vector(self, halfplane):
        x = np.array([1.0, 2.0])
        np.testing.assert_allclose(geometry.exp(np.zeros(2), x, halfplane), x)
        assert geometry.dist(x, x, halfplane) == 0.0

    def test_log_accepts_initial_guess(self, halfplane):
        x, y = np.array([0.0, 1.0]), np.array([1.0, 1.0])
        plain = geometry.log(y, x, halfplane)
        warm = geometry.log(y, x, halfplane, initial=plain + 0.01)
        np.testing.assert_allclose(warm, plain, atol=1e-7)

    def test_batch_maps(self, halfplane):
        x = np.array([[0.0, 1.0], [2.0, 0.5], [-1.0, 3.0]])
        y = np.array([[1.0, 2.0], [2.5, 0.6], [-1.0, 1.0]])
        result = geometry.log_batch(halfplane, y, x)
        assert result.converged.all()
        ends, ok, _ = geometry.exp_batch(halfplane, result.vectors, x)
        assert ok.all()
        np.testing.assert_allclose(ends, y, atol=1e-7)
        d, ok = geometry.dist_batch(halfplane, x, y)
        assert ok.all()
        expected = [_halfplane_distance(a, b) for a, b in zip(x, y)]
        np.testing.assert_allclose(d, expected, rtol=1e-6)

    def test_log_batch_shape_mismatch(self, halfplane):
        with pytest.raises(DimensionMismatchError, match="equal shapes"):
            geometry.log_batch(halfplane, np.ones((2, 2)), np.ones((3, 2)))

    def test_leaving_the_domain(self, segment):
        with pytest.raises(IncompleteGeodesicError) as info:
            geometry.exp(np.array([2.0]), np.array([0.5]), segment)
        assert 0.2 < info.value.exit_time <= 0.25

    def test_closed_forms_are_used(self):
        flat = euclidean_spec(2)
        assert geometry.dist([0.0, 0.0], [3.0, 4.0], flat) == 5.0
        v = geometry.log([1.0, 1.0], [0.0, 0.0], flat)
        np.testing.assert_array_equal(v, [1.0, 1.0])


class TestGeodesics:
    """Sampled geodesics, spheres and parallel transport."""

    def test_constant_speed_and_endpoints(self, halfplane):
        a, b = np.array([0.0, 1.0]), np.array([2.0, 1.0])
        path = geometry.geodesic(a, b, halfplane, 20)
        assert len(path) == 21
        np.testing.assert_array_equal(path.start, a)
        np.testing.assert_array_equal(path.end, b)
        np.testing.assert_allclose(path.speeds, path.length, rtol=1e-6)
        assert path.length == pytest.approx(math.acosh(3.0), rel=1e-7)
        # the geodesic arcs upward between points at equal height
        assert path.points[10, 1] > 1.0

    def test_tangent_input(self, halfplane):
        x = np.array([0.0, 1.0])
        path = geometry.geodesic(x, np.array([0.0, 1.0]), halfplane, 4, tangent=True)
        np.testing.assert_allclose(path.end, [0.0, math.e], rtol=1e-8)

    def test_default_sample_count(self):
        path = geometry.geodesic([0.0, 0.0], [1.0, 1.0], euclidean_spec(2))
        assert len(path) == 101

    def test_rejects_zero_samples(self):
        with pytest.raises(DomainError, match="n_samples"):
            geometry.geodesic([0.0], [1.0], euclidean_spec(1), 0)

    def test_geodesic_sphere(self, halfplane):
        center = np.array([0.0, 1.0])
        rays = geometry.geodesic_sphere(center, 0.5, halfplane, 8, 10)
        assert len(rays) == 8
        for ray in rays:
            assert _halfplane_distance(center, ray.end) == pytest.approx(0.5, rel=1e-7)

    def test_sphere_in_one_dimension(self, segment):
        rays = geometry.geodesic_sphere(np.array([0.5]), 0.1, segment, n_samples=2)
        ends = sorted(float(ray.end[0]) for ray in rays)
        np.testing.assert_allclose(ends, [0.4, 0.6])

    def test_sphere_needs_small_chart(self):
        with pytest.raises(DimensionMismatchError):
            geometry.geodesic_sphere(np.zeros(3), 1.0, euclidean_spec(3))

    def test_parallel_transport_preserves_norm(self, halfplane):
        a, b = np.array([0.0, 1.0]), np.array([2.0, 0.5])
        path = geometry.geodesic(a, b, halfplane, 10)
        u = np.array([0.3, -0.8])
        moved = geometry.parallel_transport(u, path, halfplane)
        assert geometry.norm(moved, b, halfplane) == pytest.approx(
            geometry.norm(u, a, halfplane), rel=1e-7
        )

    def test_parallel_transport_of_velocity(self, halfplane):
        a, b = np.array([0.0, 1.0]), np.array([2.0, 0.5])
        path = geometry.geodesic(a, b, halfplane, 10)
        moved = geometry.parallel_transport(path.velocities[0], path, halfplane)
        np.testing.assert_allclose(moved, path.velocities[-1], atol=1e-6)


class TestCurvature:
    """Riemann tensor and sectional curvature signs and values."""

    def test_halfplane(self, halfplane):
        k = geometry.sectional_curvature(
            np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([0.5, 1.5]), halfplane
        )
        assert k == pytest.approx(-1.0, abs=1e-4)

    def test_sphere(self, sphere):
        k = geometry.sectional_curvature(
            np.array([1.0, 0.0]), np.array([0.3, 1.0]), np.array([1.0, 0.0]), sphere
        )
        assert k == pytest.approx(0.25, abs=1e-4)

    def test_riemann_antisymmetry(self, sphere):
        r = geometry.riemann_tensor(sphere, np.array([1.2, 0.0]))
        np.testing.assert_allclose(r, -np.swapaxes(r, 1, 2), atol=1e-12)

    def test_riemann_curvature_vector(self, halfplane):
        x = np.array([0.0, 1.0])
        e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        # constant curvature -1: R(u, v)v = <v, v>u - <u, v>v
        out = geometry.riemann_curvature(halfplane, x, e1, e2, e2)
        np.testing.assert_allclose(out, [1.0, 0.0], atol=1e-4)
        assert out @ halfplane.metric_matrix(x) @ e1 > 0

    def test_flat(self):
        e1, e2 = [1.0, 0.0], [0.0, 1.0]
        k = geometry.sectional_curvature(e1, e2, [0.0, 0.0], euclidean_spec(2))
        assert k == 0.0

    def test_one_dimensional(self, segment):
        with pytest.raises(UndefinedCurvatureError):
            geometry.sectional_curvature([1.0], [1.0], [0.5], segment)

    def test_degenerate_plane(self, halfplane):
        with pytest.raises(DegeneratePlaneError):
            geometry.sectional_curvature([1.0, 1.0], [2.0, 2.0], [0.0, 1.0], halfplane)
