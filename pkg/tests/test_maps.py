"""Tests for the closed-form map families."""

import numpy as np
import pytest

from hilbertgeom.convex_domain import Ellipse, Polygon, SuperEllipse
from hilbertgeom.errors import UnsupportedTransform
from hilbertgeom.geom_core import ProjMap
from hilbertgeom.maps import MapFamily, make_map, radial_contraction, random_projective, squeeze


def test_random_projective_is_seeded():
    domain = Polygon.regular(5)
    a = random_projective(np.random.default_rng(0), domain)
    b = random_projective(np.random.default_rng(0), domain)
    c = random_projective(np.random.default_rng(1), domain)
    assert a.relative_error(b) == 0.0
    assert a.relative_error(c) > 1e-3


@pytest.mark.parametrize(
    "domain",
    [Polygon.regular(6, radius=3.0, center=(10.0, -4.0)), SuperEllipse((1.0, 1.0), (2.0, 0.5), 4.0, 0.7)],
    ids=["hexagon", "superellipse"],
)
def test_random_projective_keeps_domain_in_chart(domain):
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = random_projective(rng, domain)
        w = m.weights(domain.outline(128))
        assert np.all(w > 0) or np.all(w < 0)
        domain.transformed(m)


def test_radial_contraction_fixes_center_and_shrinks():
    contract = radial_contraction((0.0, 0.0), 1.0, 0.1)
    assert np.allclose(contract([(0.0, 0.0)]), [[0.0, 0.0]])
    assert np.allclose(contract([(0.5, 0.0)]), [[0.5 * (1 - 0.1 * 0.25), 0.0]])


def test_squeeze_scales_one_axis():
    assert np.allclose(squeeze((0.0, 0.0), 0.9)([(0.5, 0.3)]), [[0.45, 0.3]])


def test_projective_family_uses_a_given_matrix():
    square = Polygon.unit_square()
    entries = [1.0, 0.1, 0.0, 0.0, 1.0, 0.1, 0.05, 0.0, 1.0]
    smap = make_map(MapFamily.PROJECTIVE, square, matrix=entries)
    expected = ProjMap.from_list(entries).apply_affine(np.array([[0.5, 0.5]]))
    assert np.allclose(smap.evaluate([(0.5, 0.5)]), expected)
    assert smap.family == "projective"
    assert smap.is_callable


def test_identity_and_squeeze_keep_the_domain():
    disk = Ellipse.disk()
    assert make_map(MapFamily.IDENTITY, disk).target is disk
    assert make_map(MapFamily.SQUEEZE, disk).target is disk


@pytest.mark.parametrize("family", ["reciprocal", "reciprocal-permuted", "hex-symmetry"])
def test_triangle_families_need_a_triangle(family):
    with pytest.raises(UnsupportedTransform):
        make_map(family, Polygon.unit_square())


def test_hex_symmetry_index_range():
    with pytest.raises(ValueError):
        make_map(MapFamily.HEX_SYMMETRY, Polygon.standard_triangle(), index=12)


def test_reciprocal_permuted_composes_with_the_swap():
    triangle = Polygon.standard_triangle()
    plain = make_map(MapFamily.RECIPROCAL, triangle).evaluate([(0.5, 0.25)])
    swapped = make_map(MapFamily.RECIPROCAL_PERMUTED, triangle).evaluate([(0.5, 0.25)])
    assert np.allclose(plain, [[0.2, 0.4]], atol=1e-12)
    assert np.allclose(swapped, [[0.4, 0.4]], atol=1e-12)
