"""Closed-form map families used to exercise the classifier."""

import logging
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .convex_domain import ConvexDomain, ShapeClass
from .errors import UnsupportedTransform
from .geom_core import ProjMap
from .simplex_special import hex_symmetries, pull_back
from .webs_isometry import SampledMap

logger = logging.getLogger("hilbertgeom")


class MapFamily(str, Enum):
    IDENTITY = "identity"
    PROJECTIVE = "projective"
    PERTURBED = "perturbed"
    RECIPROCAL = "reciprocal"
    RECIPROCAL_PERMUTED = "reciprocal-permuted"
    SQUEEZE = "squeeze"
    HEX_SYMMETRY = "hex-symmetry"


def _normalizing_similarity(domain: ConvexDomain) -> np.ndarray:
    """Matrix moving the domain center to the origin and its bounding radius to 1."""
    s = 1.0 / domain.bound_radius
    c = domain.center
    return np.array([[s, 0.0, -s * c[0]], [0.0, s, -s * c[1]], [0.0, 0.0, 1.0]])


def random_projective(rng: np.random.Generator, domain: ConvexDomain, strength: float = 0.15) -> ProjMap:
    """A well-conditioned projective map close to the identity on the domain's scale."""
    norm = _normalizing_similarity(domain)
    local = np.eye(3) + strength * rng.uniform(-1.0, 1.0, size=(3, 3))
    return ProjMap(np.linalg.inv(norm) @ local @ norm)


def radial_contraction(center, radius: float, epsilon: float):
    """p -> c + (p - c) * (1 - epsilon * |p - c|^2 / radius^2); maps a star domain into itself."""
    c = np.asarray(center, dtype=float)

    def contract(points):
        rel = np.atleast_2d(np.asarray(points, dtype=float)) - c
        factor = 1.0 - epsilon * np.sum(rel**2, axis=1) / radius**2
        return c + rel * factor[:, None]

    return contract


def squeeze(center, factor: float):
    """(x, y) -> (cx + factor * (x - cx), y)."""
    cx = float(center[0])

    def apply(points):
        out = np.atleast_2d(np.asarray(points, dtype=float)).copy()
        out[:, 0] = cx + factor * (out[:, 0] - cx)
        return out

    return apply


def _require_triangle(domain: ConvexDomain, family: MapFamily) -> None:
    if domain.classify_shape() != ShapeClass.TRIANGLE:
        raise UnsupportedTransform(f"map family {family.value} is defined on triangles only")


def make_map(
    family: MapFamily,
    source: ConvexDomain,
    rng: Optional[np.random.Generator] = None,
    epsilon: float = 1e-2,
    factor: float = 0.9,
    index: int = 0,
    matrix: Optional[Sequence[float]] = None,
) -> SampledMap:
    """A callable SampledMap of the given family on the source domain."""
    family = MapFamily(family)
    rng = rng if rng is not None else np.random.default_rng(0)

    if family == MapFamily.IDENTITY:
        return SampledMap.from_callable(lambda p: np.array(p, dtype=float), source, source, family=family.value)

    if family in (MapFamily.PROJECTIVE, MapFamily.PERTURBED):
        proj = ProjMap.from_list(matrix) if matrix is not None else random_projective(rng, source)
        target = source.transformed(proj)
        if family == MapFamily.PROJECTIVE:
            func = proj.apply_affine
        else:
            contract = radial_contraction(source.center, source.bound_radius, epsilon)

            def func(points):
                return proj.apply_affine(contract(points))

        logger.debug("%s map matrix: %s", family.value, proj.to_list())
        return SampledMap.from_callable(func, source, target, family=family.value)

    if family == MapFamily.SQUEEZE:
        return SampledMap.from_callable(squeeze(source.center, factor), source, source, family=family.value)

    _require_triangle(source, family)
    if family == MapFamily.RECIPROCAL:
        linear = -np.eye(2)
    elif family == MapFamily.RECIPROCAL_PERMUTED:
        linear = -np.array([[0.0, 1.0], [1.0, 0.0]])
    else:
        symmetries = hex_symmetries()
        if not 0 <= index < len(symmetries):
            raise ValueError(f"hex symmetry index must be in 0..{len(symmetries) - 1}, got {index}")
        linear = symmetries[index]
    return SampledMap.from_callable(pull_back(linear, source), source, source, family=family.value)
