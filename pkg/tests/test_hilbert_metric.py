"""Tests for the Hilbert distance, additivity, the geodesic probe and metric balls."""

import math

import numpy as np
import pytest

from hilbertgeom.convex_domain import Ellipse, Polygon, SuperEllipse
from hilbertgeom.errors import CoincidentPoints, NotInterior
from hilbertgeom.geom_core import ProjMap
from hilbertgeom.hilbert_metric import (
    distance,
    distances,
    metric_ball,
    segment_additivity,
    unique_geodesic_probe,
)
from hilbertgeom.maps import random_projective
from hilbertgeom.simplex_special import barycentric, hex_norm_many, to_hex_many

DOMAINS = {
    "disk": Ellipse.disk(),
    "ellipse": Ellipse((0.0, 0.0), (1.0, 0.6), 0.3),
    "superellipse": SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2),
    "pentagon": Polygon.regular(5),
    "hexagon": Polygon.regular(6),
    "square": Polygon.unit_square(),
    "triangle": Polygon.standard_triangle(),
}


def _pairs(domain, n, seed=0):
    pts = domain.interior_samples(np.random.default_rng(seed), 2 * n)
    return pts[:n], pts[n:]


# --- distance ---

def test_distance_examples():
    disk = Ellipse.disk()
    assert distance(disk, (0.0, 0.0), (0.5, 0.0)) == pytest.approx(math.log(3.0), abs=1e-12)
    assert distance(disk, (0.3, 0.1), (0.3, 0.1)) == 0.0
    square = Polygon.unit_square()
    assert distance(square, (0.25, 0.5), (0.75, 0.5)) == pytest.approx(math.log(9.0), abs=1e-12)
    triangle = Polygon.standard_triangle()
    # chord (0, 0.2)-(0.8, 0.2): (0.6/0.4) * (0.4/0.2)
    assert distance(triangle, (0.2, 0.2), (0.4, 0.2)) == pytest.approx(math.log(3.0), abs=1e-12)


@pytest.mark.parametrize("r", [0.1, 0.5, 0.9, 0.99])
def test_disk_distance_from_center_matches_closed_form(r):
    assert distance(Ellipse.disk(), (0.0, 0.0), (r, 0.0)) == pytest.approx(math.log((1 + r) / (1 - r)), abs=1e-12)


def test_distance_on_a_large_far_away_disk():
    disk = Ellipse.disk(center=(1e7, 1e7), radius=1e7)
    assert distance(disk, (1e7, 1e7), (1.5e7, 1e7)) == pytest.approx(math.log(3.0), rel=1e-9)
    assert distance(disk, (1e7, 1e7), (1.3e7, 1.4e7)) == pytest.approx(math.log(3.0), rel=1e-9)


def test_distance_rejects_exterior_points():
    with pytest.raises(NotInterior):
        distance(Ellipse.disk(), (0.0, 0.0), (1.0, 0.0))
    with pytest.raises(NotInterior):
        distance(Polygon.unit_square(), (2.0, 0.5), (0.5, 0.5))


def test_distance_grows_without_bound_towards_the_boundary():
    disk = Ellipse.disk()
    values = [distance(disk, (0.0, 0.0), (1.0 - 10.0**-k, 0.0)) for k in range(1, 9)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 18.0


# --- metric axioms ---

@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_distance_is_symmetric_and_positive(name):
    domain = DOMAINS[name]
    xs, ys = _pairs(domain, 1000)
    forward = distances(domain, xs, ys)
    backward = distances(domain, ys, xs)
    assert np.max(np.abs(forward - backward)) < 1e-10
    assert np.all(forward > 0.0)


@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_triangle_inequality(name):
    domain = DOMAINS[name]
    pts = domain.interior_samples(np.random.default_rng(1), 3000)
    x, y, z = pts[:1000], pts[1000:2000], pts[2000:]
    slack = distances(domain, x, y) + distances(domain, y, z) - distances(domain, x, z)
    assert np.min(slack) >= -1e-10


@pytest.mark.parametrize("name", ["disk", "superellipse", "pentagon", "triangle"])
def test_batch_distances_agree_with_scalar_distance(name):
    domain = DOMAINS[name]
    xs, ys = _pairs(domain, 50, seed=2)
    batch = distances(domain, xs, ys)
    for x, y, d in zip(xs, ys, batch):
        assert distance(domain, x, y) == pytest.approx(d, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_points_on_a_segment_split_the_distance(name):
    domain = DOMAINS[name]
    rng = np.random.default_rng(3)
    xs, ys = _pairs(domain, 1000, seed=3)
    lam = rng.uniform(0.0, 1.0, size=(1000, 1))
    zs = xs + lam * (ys - xs)
    defect = distances(domain, xs, zs) + distances(domain, zs, ys) - distances(domain, xs, ys)
    assert np.max(np.abs(defect)) < 1e-9


def test_segment_additivity_off_segment_is_nonnegative():
    square = Polygon.unit_square()
    assert segment_additivity(square, (0.25, 0.5), (0.5, 0.5), (0.75, 0.5)) == pytest.approx(0.0, abs=1e-12)
    assert segment_additivity(square, (0.25, 0.5), (0.5, 0.6), (0.75, 0.5)) >= -1e-12
    assert segment_additivity(Ellipse.disk(), (-0.3, 0.0), (0.0, 0.2), (0.3, 0.0)) > 1e-3


# --- invariance ---

@pytest.mark.parametrize("seed", range(5))
def test_distance_is_invariant_under_projective_maps(seed):
    domain = Polygon.regular(5)
    rng = np.random.default_rng(seed)
    m = random_projective(rng, domain)
    image = domain.transformed(m)
    xs, ys = _pairs(domain, 200, seed=seed)
    before = distances(domain, xs, ys)
    after = distances(image, m.apply_affine(xs), m.apply_affine(ys))
    assert np.max(np.abs(before - after)) < 1e-8


def test_distance_is_invariant_under_maps_of_an_ellipse():
    domain = Ellipse((0.0, 0.0), (1.0, 0.6), 0.3)
    m = ProjMap([[1.0, 0.1, 0.05], [-0.05, 0.9, 0.1], [0.15, -0.1, 1.0]])
    image = domain.transformed(m)
    xs, ys = _pairs(domain, 200, seed=4)
    before = distances(domain, xs, ys)
    after = distances(image, m.apply_affine(xs), m.apply_affine(ys))
    assert np.max(np.abs(before - after)) < 1e-8


def test_smaller_domain_has_larger_distances():
    disk = Ellipse.disk()
    square = Polygon([(-0.7, -0.7), (0.7, -0.7), (0.7, 0.7), (-0.7, 0.7)])
    xs, ys = _pairs(square, 500, seed=5)
    assert np.all(distances(disk, xs, ys) <= distances(square, xs, ys) + 1e-10)


# --- geodesic probe ---

def test_probe_finds_second_geodesic_in_square():
    report = unique_geodesic_probe(Polygon.unit_square(), (0.25, 0.5), (0.75, 0.5), grid_resolution=200)
    assert report.additivity_defect < 1e-9
    assert report.certifies_nonunique
    assert report.witness is not None
    assert report.candidates > 0


def test_probe_finds_no_second_geodesic_in_disk():
    report = unique_geodesic_probe(Ellipse.disk(), (-0.3, 0.0), (0.3, 0.0), grid_resolution=200)
    assert report.additivity_defect > 1e-4
    assert not report.certifies_nonunique


def test_probe_through_a_triangle_vertex_stays_above_threshold():
    report = unique_geodesic_probe(Polygon.standard_triangle(), (0.2, 0.2), (0.4, 0.4), grid_resolution=100)
    assert not report.certifies_nonunique


def test_probe_rejects_coincident_points():
    with pytest.raises(CoincidentPoints):
        unique_geodesic_probe(Ellipse.disk(), (0.1, 0.0), (0.1, 0.0))


# --- metric balls ---

def test_disk_ball_of_radius_ln3_is_euclidean_half_disk():
    ball = metric_ball(Ellipse.disk(), (0.0, 0.0), math.log(3.0), 64)
    assert ball.shape == (64, 2)
    assert np.max(np.abs(np.linalg.norm(ball, axis=1) - 0.5)) < 1e-8


def test_tiny_ball_collapses_to_its_center():
    ball = metric_ball(Ellipse.disk(), (0.2, 0.1), 1e-12, 16)
    assert np.max(np.linalg.norm(ball - np.array([0.2, 0.1]), axis=1)) < 1e-9


def test_triangle_ball_is_the_hexagonal_norm_ball():
    triangle = Polygon.standard_triangle()
    center = np.array([1.0 / 3.0, 1.0 / 3.0])
    ball = metric_ball(triangle, center, 1.0, 96)
    for p in ball:
        assert distance(triangle, center, p) == pytest.approx(1.0, abs=1e-9)
    hexes = to_hex_many(barycentric(triangle, ball)) - to_hex_many(barycentric(triangle, center))
    assert np.max(np.abs(hex_norm_many(hexes) - 1.0)) < 1e-6


def test_ball_argument_checks():
    with pytest.raises(ValueError):
        metric_ball(Ellipse.disk(), (0.0, 0.0), 1.0, 4)
    with pytest.raises(ValueError):
        metric_ball(Ellipse.disk(), (0.0, 0.0), 0.0)
    with pytest.raises(NotInterior):
        metric_ball(Ellipse.disk(), (2.0, 0.0), 1.0)
