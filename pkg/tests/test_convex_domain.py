"""Tests for convex domains: membership, chords, extreme points, transforms and JSON."""

import logging
import math

import numpy as np
import pytest
from pydantic import ValidationError

from hilbertgeom.convex_domain import (
    INFINITE,
    Ellipse,
    Polygon,
    ProjectiveImage,
    Region,
    ShapeClass,
    SuperEllipse,
    chord_endpoints,
    classify_shape,
    contains,
    dump_domain,
    extreme_points,
    load_domain,
    parse_domain,
)
from hilbertgeom.errors import CoincidentPoints, DomainOutOfChart, InvalidDomain, NotInterior
from hilbertgeom.geom_core import ProjMap, collinearity_defect


def _monotone_chain(points):
    """Strict convex hull, counterclockwise, collinear points dropped."""
    pts = sorted(map(tuple, points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _perspective():
    return ProjMap([[1.0, 0.1, 0.05], [-0.05, 0.9, 0.1], [0.15, -0.1, 1.0]])


# --- contains ---

def test_contains_examples():
    assert contains(Ellipse.disk(), (0.5, 0.0)) == Region.INTERIOR
    assert contains(Ellipse.disk(), (1.0, 0.0)) == Region.BOUNDARY
    assert contains(Ellipse.disk(), (1.5, 0.0)) == Region.EXTERIOR
    square = Polygon.unit_square()
    assert contains(square, (0.5, 0.5)) == Region.INTERIOR
    assert contains(square, (1.0, 0.5)) == Region.BOUNDARY
    assert contains(square, (0.0, 0.0)) == Region.BOUNDARY
    assert contains(square, (-0.1, 0.5)) == Region.EXTERIOR


def test_contains_boundary_band_is_relative_to_diameter():
    square = Polygon.unit_square()
    assert contains(square, (1.0 - 1e-12, 0.5)) == Region.BOUNDARY
    assert contains(square, (1.0 - 1e-6, 0.5)) == Region.INTERIOR


# --- chords ---

def test_disk_chord_endpoints():
    chord = chord_endpoints(Ellipse.disk(), (0.0, 0.0), (0.5, 0.0))
    assert np.allclose(chord.xbar, [-1.0, 0.0], atol=1e-12)
    assert np.allclose(chord.ybar, [1.0, 0.0], atol=1e-12)


def test_square_chord_endpoints():
    chord = chord_endpoints(Polygon.unit_square(), (0.25, 0.5), (0.75, 0.5))
    assert np.allclose(chord.xbar, [0.0, 0.5], atol=1e-15)
    assert np.allclose(chord.ybar, [1.0, 0.5], atol=1e-15)


def test_triangle_chord_endpoints():
    chord = chord_endpoints(Polygon.standard_triangle(), (0.2, 0.2), (0.4, 0.2))
    assert np.allclose(chord.xbar, [0.0, 0.2], atol=1e-15)
    assert np.allclose(chord.ybar, [0.8, 0.2], atol=1e-15)


def test_chord_rejects_coincident_or_exterior_points():
    with pytest.raises(CoincidentPoints):
        chord_endpoints(Ellipse.disk(), (0.1, 0.1), (0.1, 0.1))
    with pytest.raises(NotInterior):
        chord_endpoints(Ellipse.disk(), (0.1, 0.1), (2.0, 0.0))


@pytest.mark.parametrize(
    "domain",
    [
        Ellipse((0.2, -0.1), (1.0, 0.6), 0.3),
        SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2),
        SuperEllipse((0.0, 0.0), (1.0, 0.8), 1.5, 0.2),
        Polygon.regular(5),
    ],
    ids=["ellipse", "superellipse-4", "superellipse-1.5", "pentagon"],
)
def test_chord_endpoints_are_on_the_boundary_and_ordered(domain):
    rng = np.random.default_rng(0)
    pts = domain.interior_samples(rng, 200)
    for x, y in zip(pts[:100], pts[100:]):
        chord = domain.chord(x, y)
        assert abs(float(domain.signed_distance(chord.xbar[None, :])[0])) < 1e-10
        assert abs(float(domain.signed_distance(chord.ybar[None, :])[0])) < 1e-10
        assert collinearity_defect([chord.xbar, x, y, chord.ybar]) < 1e-10
        u = y - x
        params = [float((p - x) @ u) for p in (chord.xbar, x, y, chord.ybar)]
        assert params == sorted(params)


def test_smooth_chord_endpoints_solve_the_implicit_equation():
    domain = SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)
    rng = np.random.default_rng(1)
    pts = domain.interior_samples(rng, 100)
    for x, y in zip(pts[:50], pts[50:]):
        chord = domain.chord(x, y)
        assert abs(float(domain.implicit_function(chord.xbar)[0])) < 1e-12
        assert abs(float(domain.implicit_function(chord.ybar)[0])) < 1e-12


def test_clip_line_missing_the_domain_gives_nan():
    t_lo, t_hi = Polygon.unit_square().clip_line(np.array([[0.0, 2.0]]), np.array([[1.0, 0.0]]))
    assert np.isnan(t_lo[0]) and np.isnan(t_hi[0])
    t_lo, t_hi = Ellipse.disk().clip_line(np.array([[0.0, 2.0]]), np.array([[1.0, 0.0]]))
    assert np.isnan(t_lo[0]) and np.isnan(t_hi[0])


# --- extreme points and shape class ---

def test_extreme_points_drop_collinear_vertices():
    quad = Polygon([(0, 0), (1, 0), (2, 0), (1, 1)])
    points = extreme_points(quad)
    assert len(points) == 3
    assert classify_shape(quad) == ShapeClass.TRIANGLE


def test_extreme_points_of_smooth_domains_are_infinite():
    assert extreme_points(Ellipse.disk()) is INFINITE
    assert classify_shape(SuperEllipse(exponent=4.0)) == ShapeClass.STRICTLY_CONVEX


@pytest.mark.parametrize("seed", range(20))
def test_extreme_points_match_hull_of_random_polygon(seed):
    rng = np.random.default_rng(seed)
    cloud = rng.uniform(-1, 1, size=(30, 2))
    hull = np.array(_monotone_chain(cloud))
    # pad every edge with its midpoint; those are not extreme
    padded = []
    for a, b in zip(hull, np.roll(hull, -1, axis=0)):
        padded += [a, 0.5 * (a + b)]
    polygon = Polygon(padded)
    got = sorted(tuple(np.round(p, 12)) for p in polygon.extreme_points())
    want = sorted(tuple(np.round(p, 12)) for p in hull)
    assert got == want


def test_classify_shape_examples():
    assert Polygon.standard_triangle().classify_shape() == ShapeClass.TRIANGLE
    assert Polygon.unit_square().classify_shape() == ShapeClass.QUADRILATERAL
    assert Polygon.regular(5).classify_shape() == ShapeClass.POLYGON_5PLUS
    assert Polygon.regular(6).classify_shape() == ShapeClass.POLYGON_5PLUS
    assert Ellipse.disk().classify_shape() == ShapeClass.STRICTLY_CONVEX


def test_classify_shape_is_projectively_invariant():
    rng = np.random.default_rng(2)
    for polygon in (Polygon.standard_triangle(), Polygon.unit_square(), Polygon.regular(5)):
        for _ in range(5):
            m = ProjMap(np.eye(3) + 0.1 * rng.uniform(-1, 1, size=(3, 3)))
            assert polygon.transformed(m).classify_shape() == polygon.classify_shape()


# --- polygon validation ---

def test_clockwise_polygon_is_reoriented_with_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="hilbertgeom"):
        polygon = Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert "clockwise" in caplog.text
    assert polygon.contains((0.5, 0.5)) == Region.INTERIOR
    assert polygon.classify_shape() == ShapeClass.QUADRILATERAL


def test_duplicate_vertices_are_dropped(caplog):
    with caplog.at_level(logging.WARNING, logger="hilbertgeom"):
        polygon = Polygon([(0, 0), (1, 0), (1, 0), (0, 1)])
    assert "duplicate" in caplog.text
    assert len(polygon.vertices) == 3


@pytest.mark.parametrize(
    "vertices",
    [
        [(0, 0), (1, 0)],
        [(0, 0), (1, 0), (2, 0)],
        [(0, 0), (2, 0), (1, 0.2), (1, 2)],
        [(math.cos(a), math.sin(a)) for a in np.linspace(0, 4 * math.pi, 5, endpoint=False)],
    ],
    ids=["two-vertices", "flat", "reflex", "pentagram"],
)
def test_invalid_polygons_are_rejected(vertices):
    with pytest.raises(InvalidDomain):
        Polygon(vertices)


def test_invalid_smooth_domains_are_rejected():
    with pytest.raises(InvalidDomain):
        Ellipse((0, 0), (1.0, 0.0))
    with pytest.raises(InvalidDomain):
        SuperEllipse(exponent=1.0)


# --- transforms ---

def test_polygon_image_leaving_the_chart_is_rejected():
    with pytest.raises(DomainOutOfChart):
        Polygon.unit_square().transformed(ProjMap([[1, 0, 0], [0, 1, 0], [-1, 0, 0.5]]))


def test_ellipse_image_is_the_mapped_ellipse():
    base = Ellipse((0.1, 0.2), (1.0, 0.6), 0.3)
    m = _perspective()
    image = base.transformed(m)
    assert isinstance(image, Ellipse)
    mapped = m.apply_affine(base.outline(64))
    assert np.max(np.abs(image.implicit_function(mapped))) < 1e-9
    assert image.contains(m.apply_affine(base.center)) == Region.INTERIOR


def test_superellipse_similarity_stays_a_superellipse():
    base = SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)
    c, s = 2.0 * math.cos(0.5), 2.0 * math.sin(0.5)
    image = base.transformed(ProjMap([[c, -s, 1.0], [s, c, -1.0], [0.0, 0.0, 1.0]]))
    assert isinstance(image, SuperEllipse)
    assert image.semi_axes == pytest.approx((2.0, 1.6))


def test_superellipse_perspective_image():
    base = SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)
    m = _perspective()
    image = base.transformed(m)
    assert isinstance(image, ProjectiveImage)
    assert image.classify_shape() == ShapeClass.STRICTLY_CONVEX
    assert image.contains(m.apply_affine(base.center)) == Region.INTERIOR
    for p in m.apply_affine(base.outline(32)):
        assert image.contains(p) == Region.BOUNDARY
    # nested images collapse onto the base
    again = image.transformed(_perspective())
    assert again.base is base


def test_projective_image_chords_match_mapped_base_chords():
    base = SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2)
    m = _perspective()
    image = base.transformed(m)
    rng = np.random.default_rng(3)
    pts = base.interior_samples(rng, 40)
    for x, y in zip(pts[:20], pts[20:]):
        chord = base.chord(x, y)
        mapped = image.chord(m.apply_affine(x), m.apply_affine(y))
        ends = m.apply_affine(np.array([chord.xbar, chord.ybar]))
        assert np.allclose(mapped.xbar, ends[0], atol=1e-9)
        assert np.allclose(mapped.ybar, ends[1], atol=1e-9)


# --- sampling ---

def test_interior_samples_are_seeded_and_interior():
    domain = Polygon.regular(5)
    a = domain.interior_samples(np.random.default_rng(7), 300)
    b = domain.interior_samples(np.random.default_rng(7), 300)
    assert a.shape == (300, 2)
    assert np.array_equal(a, b)
    assert np.all(domain.is_interior(a))
    assert np.all(domain.signed_distance(a) > 0.0)


# --- JSON ---

@pytest.mark.parametrize(
    "domain",
    [
        Polygon.regular(5),
        Ellipse((0.1, 0.2), (1.0, 0.6), 0.3),
        SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2),
        SuperEllipse((0.0, 0.0), (1.0, 0.8), 4.0, 0.2).transformed(_perspective()),
    ],
    ids=["polygon", "ellipse", "superellipse", "projective-image"],
)
def test_domain_json_reload(domain, tmp_path):
    path = tmp_path / "domain.json"
    path.write_text(dump_domain(domain))
    loaded = load_domain(path)
    assert type(loaded) is type(domain)
    assert np.allclose(loaded.outline(32), domain.outline(32), atol=1e-12)


def test_parse_domain_rejects_unknown_type():
    with pytest.raises(ValidationError):
        parse_domain({"type": "circle", "radius": 1.0})
