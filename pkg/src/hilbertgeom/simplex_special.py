"""The triangle exception: its Hilbert geometry is a normed plane with a hexagonal ball.

Phi(t) = (ln t1/t3, ln t2/t3) sends the open triangle onto R^2 and carries the
Hilbert distance to the norm max(u, w, 0) - min(u, w, 0). Linear symmetries of
that norm pull back to isometries of the triangle; half of them are not projective.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import EPS
from .convex_domain import ConvexDomain, ShapeClass
from .errors import BoundaryPoint, UnsupportedTransform
from .geom_core import as_affine
from .hilbert_metric import distance

_SUM_TOL = 1e-12

# Phi in log coordinates: (l1, l2, l3) -> (l1 - l3, l2 - l3)
_LOG_DIFF = np.array([[1.0, 0.0, -1.0], [0.0, 1.0, -1.0]])


@dataclass(frozen=True)
class BarycentricPoint:
    """Barycentric coordinates of an interior point of a triangle."""

    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        if min(self.t1, self.t2, self.t3) <= EPS:
            raise BoundaryPoint(f"barycentric point ({self.t1}, {self.t2}, {self.t3}) is not interior")
        if abs(self.t1 + self.t2 + self.t3 - 1.0) > _SUM_TOL:
            raise ValueError("barycentric coordinates must sum to 1")

    @classmethod
    def from_weights(cls, a: float, b: float, c: float) -> "BarycentricPoint":
        if min(a, b, c) <= 0:
            raise BoundaryPoint(f"weights ({a}, {b}, {c}) are not all positive")
        s = a + b + c
        return cls(a / s, b / s, c / s)

    @classmethod
    def from_affine(cls, triangle: ConvexDomain, p) -> "BarycentricPoint":
        t = barycentric(triangle, as_affine(p)[None, :])[0]
        if t.min() <= EPS:
            raise BoundaryPoint(f"point {tuple(as_affine(p))} is not inside the triangle")
        return cls.from_weights(*t)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.t1, self.t2, self.t3])

    def to_affine(self, triangle: ConvexDomain) -> np.ndarray:
        return self.array @ triangle_vertices(triangle)


@dataclass(frozen=True)
class HexVector:
    u: float
    w: float

    @property
    def array(self) -> np.ndarray:
        return np.array([self.u, self.w])

    def __sub__(self, other: "HexVector") -> "HexVector":
        return HexVector(self.u - other.u, self.w - other.w)


def triangle_vertices(triangle: ConvexDomain) -> np.ndarray:
    """The three extreme points of a triangular domain, counterclockwise."""
    if triangle.classify_shape() != ShapeClass.TRIANGLE:
        raise UnsupportedTransform(f"expected a triangle, got {triangle.classify_shape().value}")
    return np.array(triangle.extreme_points())


def barycentric(triangle: ConvexDomain, points) -> np.ndarray:
    """(N, 3) barycentric coordinates of affine points, via signed areas."""
    v = triangle_vertices(triangle)
    pts = np.atleast_2d(np.asarray(points, dtype=float))

    def area(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (c[..., 0] - a[..., 0]) * (b[..., 1] - a[..., 1])

    total = area(v[0], v[1], v[2])
    return np.stack([area(pts, v[1], v[2]), area(v[0], pts, v[2]), area(v[0], v[1], pts)], axis=1) / total


def to_hex(p: BarycentricPoint) -> HexVector:
    return HexVector(math.log(p.t1 / p.t3), math.log(p.t2 / p.t3))


def from_hex(v: HexVector) -> BarycentricPoint:
    top = max(v.u, v.w, 0.0)
    e = np.exp(np.array([v.u, v.w, 0.0]) - top)
    return BarycentricPoint.from_weights(*e)


def to_hex_many(bary: np.ndarray) -> np.ndarray:
    logs = np.log(np.asarray(bary, dtype=float))
    return logs @ _LOG_DIFF.T


def from_hex_many(vectors: np.ndarray) -> np.ndarray:
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    logs = np.hstack([v, np.zeros((len(v), 1))])
    e = np.exp(logs - logs.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def hex_norm(v) -> float:
    u, w = (v.u, v.w) if isinstance(v, HexVector) else (float(v[0]), float(v[1]))
    return max(u, w, 0.0) - min(u, w, 0.0)


def hex_norm_many(vectors: np.ndarray) -> np.ndarray:
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    return np.maximum(v.max(axis=1), 0.0) - np.minimum(v.min(axis=1), 0.0)


def isometry_defect_triangle(x: BarycentricPoint, y: BarycentricPoint, triangle: ConvexDomain) -> float:
    """|d_Hilbert(x, y) - hex_norm(Phi x - Phi y)| for points of the given triangle."""
    d = distance(triangle, x.to_affine(triangle), y.to_affine(triangle))
    return abs(d - hex_norm(to_hex(x) - to_hex(y)))


def reciprocal_map(p: BarycentricPoint) -> BarycentricPoint:
    """(t1 : t2 : t3) -> (1/t1 : 1/t2 : 1/t3); Phi-conjugate to v -> -v."""
    return BarycentricPoint.from_weights(1.0 / p.t1, 1.0 / p.t2, 1.0 / p.t3)


_ROTATION = np.array([[1, -1], [1, 0]])
_SWAP = np.array([[0, 1], [1, 0]])


def hex_symmetries() -> list[np.ndarray]:
    """The 12 linear maps preserving hex_norm: R^k and R^k S for k = 0..5.

    R has order 6 with R^3 = -I; S swaps the coordinates.
    """
    out = []
    power = np.eye(2, dtype=int)
    for _ in range(6):
        out.append(power.copy())
        out.append(power @ _SWAP)
        power = _ROTATION @ power
    return out


def _permutation_matrices() -> list[np.ndarray]:
    return [np.eye(3)[list(perm)] for perm in itertools.permutations(range(3))]


def is_projective_symmetry(linear) -> bool:
    """True iff the pulled-back triangle map permutes barycentric coordinates."""
    lin = np.asarray(linear, dtype=float)
    return any(np.allclose(lin @ _LOG_DIFF, _LOG_DIFF @ perm) for perm in _permutation_matrices())


def pull_back(linear, triangle: ConvexDomain) -> Callable[[np.ndarray], np.ndarray]:
    """The triangle self-map x -> Phi^-1(L Phi(x)) acting on (N, 2) affine points."""
    lin = np.asarray(linear, dtype=float)
    vertices = triangle_vertices(triangle)

    def mapped(points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        bary = barycentric(triangle, np.atleast_2d(pts))
        if np.any(bary <= EPS):
            raise BoundaryPoint("pull-back evaluated outside the open triangle")
        out = from_hex_many(to_hex_many(bary) @ lin.T) @ vertices
        return out[0] if single else out

    return mapped
