"""Bounded convex planar domains and the boundary constructions the metric needs."""

import json
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import TypeAdapter

from .config import BOUNDARY_TOL, CHORD_BISECTION_STEPS, EPS, LINE_MINIMIZE_STEPS, SAMPLE_MARGIN
from .errors import (
    CoincidentPoints,
    DomainOutOfChart,
    InvalidDomain,
    NotInterior,
    UnsupportedTransform,
)
from .geom_core import ProjMap, as_affine
from .models import DomainSpec, EllipseSpec, PolygonSpec, ProjectiveImageSpec, SuperEllipseSpec

logger = logging.getLogger("hilbertgeom")


class Region(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"


class ShapeClass(str, Enum):
    TRIANGLE = "Triangle"
    QUADRILATERAL = "Quadrilateral"
    POLYGON_5PLUS = "PolygonWithAtLeast5ExtremePoints"
    STRICTLY_CONVEX = "StrictlyConvex"


class Infinite(Enum):
    """Marker for domains whose every boundary point is extreme."""

    INFINITE = "Infinite"


INFINITE = Infinite.INFINITE


@dataclass(frozen=True, eq=False)
class Chord:
    """Boundary points cut by a line through two interior points; order is xbar, x, y, ybar."""

    xbar: np.ndarray
    ybar: np.ndarray

    def point_at(self, fractions) -> np.ndarray:
        f = np.asarray(fractions, dtype=float)[..., None]
        return self.xbar + f * (self.ybar - self.xbar)


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _unit(directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(directions, axis=1)
    if np.any(norms == 0.0):
        raise CoincidentPoints("a line direction is zero")
    return directions / norms[:, None], norms


class ConvexDomain(ABC):
    """A bounded convex open set in the affine chart.

    Subclasses fill in the boundary geometry; derived extents (center, bbox,
    diameter, bounding radius) are fixed at construction.
    """

    center: np.ndarray
    bbox: tuple[float, float, float, float]
    diameter: float
    bound_radius: float

    # --- geometry every shape provides ---

    @abstractmethod
    def signed_distance(self, points: np.ndarray) -> np.ndarray:
        """Approximate Euclidean distance to the boundary, positive inside."""

    @abstractmethod
    def clip_line(self, bases: np.ndarray, directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Parameters (t_lo, t_hi) where base + t*direction crosses the boundary.

        Lines missing the open domain get NaN in both slots.
        """

    @abstractmethod
    def extreme_points(self) -> Union[list[np.ndarray], Infinite]:
        ...

    @abstractmethod
    def classify_shape(self) -> ShapeClass:
        ...

    @abstractmethod
    def transformed(self, proj_map: ProjMap) -> "ConvexDomain":
        """The image of the domain under a projective map."""

    @abstractmethod
    def outline(self, n: int = 256) -> np.ndarray:
        """Closed boundary polyline, counterclockwise, shape (n, 2)."""

    @abstractmethod
    def to_spec(self):
        ...

    # --- shared behaviour ---

    @property
    def band(self) -> float:
        return BOUNDARY_TOL * self.diameter

    def ray_exits(self, origins: np.ndarray, directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(t_minus, t_plus) of the chord through interior origins along the directions."""
        return self.clip_line(origins, directions)

    def classify_points(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        sd = self.signed_distance(pts)
        return np.where(sd > self.band, 1, np.where(sd < -self.band, -1, 0))

    def is_interior(self, points) -> np.ndarray:
        return self.classify_points(points) == 1

    def contains(self, p) -> Region:
        code = int(self.classify_points(as_affine(p)[None, :])[0])
        return {1: Region.INTERIOR, 0: Region.BOUNDARY, -1: Region.EXTERIOR}[code]

    def require_interior(self, points, where: str = "") -> None:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        bad = ~self.is_interior(pts)
        if np.any(bad):
            raise NotInterior(pts[int(np.argmax(bad))], where)

    def chord(self, x, y) -> Chord:
        x, y = as_affine(x), as_affine(y)
        length = float(np.linalg.norm(y - x))
        if length <= EPS:
            raise CoincidentPoints("chord needs two distinct points")
        self.require_interior(np.array([x, y]))
        u = (y - x) / length
        t_minus, t_plus = self.ray_exits(x[None, :], u[None, :])
        return Chord(x + t_minus[0] * u, x + t_plus[0] * u)

    def interior_samples(self, rng: np.random.Generator, n: int, margin: float = SAMPLE_MARGIN) -> np.ndarray:
        """n points drawn uniformly from the domain, kept margin*diameter clear of the boundary."""
        clearance = margin * self.diameter
        xmin, ymin, xmax, ymax = self.bbox
        offsets = np.array([[0.0, 0.0], [clearance, 0.0], [-clearance, 0.0], [0.0, clearance], [0.0, -clearance]])
        kept: list[np.ndarray] = []
        count = 0
        for _ in range(200):
            batch = rng.uniform((xmin, ymin), (xmax, ymax), size=(max(4 * n, 64), 2))
            probes = (batch[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
            ok = self.is_interior(probes).reshape(len(batch), len(offsets)).all(axis=1)
            kept.append(batch[ok])
            count += int(ok.sum())
            if count >= n:
                return np.concatenate(kept)[:n]
        raise InvalidDomain(f"could not draw {n} interior samples with margin {margin}")

    def to_json(self) -> dict:
        return self.to_spec().model_dump(mode="json")

    def _set_extents(self, center: np.ndarray, outline: np.ndarray) -> None:
        self.center = np.asarray(center, dtype=float)
        lo, hi = outline.min(axis=0), outline.max(axis=0)
        self.bbox = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
        diffs = outline[:, None, :] - outline[None, :, :]
        self.diameter = float(np.sqrt(np.max(np.sum(diffs**2, axis=2))))
        self.bound_radius = float(np.max(np.linalg.norm(outline - self.center, axis=1)))


# --- polygons ---

def _signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


class Polygon(ConvexDomain):
    """Convex polygon with counterclockwise vertices; collinear vertices are allowed."""

    def __init__(self, vertices):
        verts = np.array(vertices, dtype=float).reshape(-1, 2)
        if len(verts) < 3 or not np.all(np.isfinite(verts)):
            raise InvalidDomain("a polygon needs at least 3 finite vertices")
        scale = float(np.max(np.ptp(verts, axis=0)))
        step = np.linalg.norm(verts - np.roll(verts, 1, axis=0), axis=1)
        if np.any(step <= EPS * max(scale, 1.0)):
            logger.warning("Dropping %d duplicate polygon vertices", int(np.sum(step <= EPS * max(scale, 1.0))))
            verts = verts[step > EPS * max(scale, 1.0)]
        if len(verts) < 3:
            raise InvalidDomain("a polygon needs at least 3 distinct vertices")

        area = _signed_area(verts)
        if abs(area) <= 1e-12 * scale**2:
            raise InvalidDomain("polygon has zero area")
        if area < 0:
            logger.warning("Polygon vertices given clockwise; reorienting counterclockwise")
            verts = verts[::-1].copy()

        edges = np.roll(verts, -1, axis=0) - verts
        prev = np.roll(edges, 1, axis=0)
        cross = prev[:, 0] * edges[:, 1] - prev[:, 1] * edges[:, 0]
        dot = np.sum(prev * edges, axis=1)
        if np.any(cross < -1e-12 * scale**2):
            raise InvalidDomain("polygon is not convex")
        turning = float(np.sum(np.arctan2(cross, dot)))
        if abs(turning - 2.0 * math.pi) > 1e-6:
            raise InvalidDomain("polygon boundary winds more than once")

        self.vertices = verts
        self.vertices.setflags(write=False)
        lengths = np.linalg.norm(edges, axis=1)
        self.normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
        self.offsets = np.sum(self.normals * verts, axis=1)
        self._turn_sines = cross / (np.linalg.norm(prev, axis=1) * lengths)
        self._set_extents(verts.mean(axis=0), verts)

    @classmethod
    def regular(cls, n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = math.pi / 2) -> "Polygon":
        k = np.arange(n)
        angles = phase + 2.0 * math.pi * k / n
        return cls(np.asarray(center) + radius * np.stack([np.cos(angles), np.sin(angles)], axis=1))

    @classmethod
    def unit_square(cls) -> "Polygon":
        return cls([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])

    @classmethod
    def standard_triangle(cls) -> "Polygon":
        return cls([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])

    def signed_distance(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.min(self.offsets[None, :] - pts @ self.normals.T, axis=1)

    def clip_line(self, bases, directions) -> tuple[np.ndarray, np.ndarray]:
        b = np.atleast_2d(np.asarray(bases, dtype=float))
        d = np.atleast_2d(np.asarray(directions, dtype=float))
        d = np.broadcast_to(d, b.shape)
        denom = d @ self.normals.T
        num = self.offsets[None, :] - b @ self.normals.T
        tiny = 1e-15 * np.linalg.norm(d, axis=1)[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = num / denom
        upper = np.where(denom > tiny, t, np.inf).min(axis=1)
        lower = np.where(denom < -tiny, t, -np.inf).max(axis=1)
        parallel_outside = np.any((np.abs(denom) <= tiny) & (num <= 0.0), axis=1)
        empty = parallel_outside | ~(upper > lower) | ~np.isfinite(upper) | ~np.isfinite(lower)
        return np.where(empty, np.nan, lower), np.where(empty, np.nan, upper)

    def extreme_points(self) -> list[np.ndarray]:
        return [v.copy() for v, s in zip(self.vertices, self._turn_sines) if s > 1e-10]

    def classify_shape(self) -> ShapeClass:
        m = len(self.extreme_points())
        if m == 3:
            return ShapeClass.TRIANGLE
        if m == 4:
            return ShapeClass.QUADRILATERAL
        return ShapeClass.POLYGON_5PLUS

    def transformed(self, proj_map: ProjMap) -> "Polygon":
        w = proj_map.weights(self.vertices)
        if not (np.all(w > 0) or np.all(w < 0)) or np.min(np.abs(w)) < 1e-9 * np.max(np.abs(w)):
            raise DomainOutOfChart("projective image of the polygon meets the line at infinity")
        mapped = proj_map.apply_affine(self.vertices)
        if _signed_area(mapped) < 0:
            mapped = mapped[::-1]
        return Polygon(mapped)

    def outline(self, n: int = 256) -> np.ndarray:
        return self.vertices.copy()

    def to_spec(self) -> PolygonSpec:
        return PolygonSpec(vertices=[(float(x), float(y)) for x, y in self.vertices])

    def __repr__(self):
        return f"Polygon({len(self.vertices)} vertices)"


# --- smooth shapes given by an implicit function ---

class SmoothDomain(ConvexDomain):
    """Strictly convex domain {F < 0}; boundary crossings are found by bisection."""

    @abstractmethod
    def implicit_function(self, points: np.ndarray) -> np.ndarray:
        """F < 0 inside, F = 0 on the boundary, F > 0 outside."""

    @abstractmethod
    def boundary_point(self, angles) -> np.ndarray:
        """Boundary points at the given parameter angles."""

    def gradient(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        h = 1e-6 * self.diameter
        ex, ey = np.array([h, 0.0]), np.array([0.0, h])
        gx = self.implicit_function(pts + ex) - self.implicit_function(pts - ex)
        gy = self.implicit_function(pts + ey) - self.implicit_function(pts - ey)
        return np.stack([gx, gy], axis=1) / (2.0 * h)

    def signed_distance(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        f = self.implicit_function(pts)
        g = np.linalg.norm(self.gradient(pts), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            sd = -f / g
        return np.where(g > 0, sd, np.where(f < 0, np.inf, -np.inf))

    def outline(self, n: int = 256) -> np.ndarray:
        return self.boundary_point(np.linspace(0.0, 2.0 * math.pi, n, endpoint=False))

    def extreme_points(self) -> Infinite:
        return INFINITE

    def classify_shape(self) -> ShapeClass:
        return ShapeClass.STRICTLY_CONVEX

    def _reach(self, bases: np.ndarray) -> np.ndarray:
        # beyond this parameter every point on the line is outside the bounding disk
        return np.linalg.norm(bases - self.center, axis=1) + 1.01 * self.bound_radius + 1e-9 * self.diameter

    def _bisect(self, bases, units, t_in, t_out, steps: int = CHORD_BISECTION_STEPS) -> np.ndarray:
        t_in, t_out = t_in.copy(), t_out.copy()
        for _ in range(steps):
            mid = 0.5 * (t_in + t_out)
            inside = self.implicit_function(bases + mid[:, None] * units) < 0
            t_in = np.where(inside, mid, t_in)
            t_out = np.where(inside, t_out, mid)
        return 0.5 * (t_in + t_out)

    def ray_exits(self, origins, directions) -> tuple[np.ndarray, np.ndarray]:
        o = np.atleast_2d(np.asarray(origins, dtype=float))
        u, norms = _unit(np.broadcast_to(np.atleast_2d(np.asarray(directions, dtype=float)), o.shape))
        reach = self._reach(o)
        zero = np.zeros(len(o))
        t_plus = self._bisect(o, u, zero, reach)
        t_minus = self._bisect(o, u, zero, -reach)
        logger.debug("ray exits: %d rays bisected", len(o))
        return t_minus / norms, t_plus / norms

    def clip_line(self, bases, directions) -> tuple[np.ndarray, np.ndarray]:
        b = np.atleast_2d(np.asarray(bases, dtype=float))
        u, norms = _unit(np.broadcast_to(np.atleast_2d(np.asarray(directions, dtype=float)), b.shape))
        reach = self._reach(b)
        lo, hi = -reach.copy(), reach.copy()
        # F restricted to a line is convex here, so ternary search finds its minimum
        for _ in range(LINE_MINIMIZE_STEPS):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            left = self.implicit_function(b + m1[:, None] * u) < self.implicit_function(b + m2[:, None] * u)
            hi = np.where(left, m2, hi)
            lo = np.where(left, lo, m1)
        t_min = 0.5 * (lo + hi)
        hit = self.implicit_function(b + t_min[:, None] * u) < 0
        t_lo = self._bisect(b, u, t_min, -reach)
        t_hi = self._bisect(b, u, t_min, reach)
        return np.where(hit, t_lo / norms, np.nan), np.where(hit, t_hi / norms, np.nan)

    def _check_chart(self, proj_map: ProjMap) -> None:
        w = proj_map.weights(self.outline(720))
        if not (np.all(w > 0) or np.all(w < 0)) or np.min(np.abs(w)) < 1e-9 * np.max(np.abs(w)):
            raise DomainOutOfChart("projective image of the domain meets the line at infinity")


class Ellipse(SmoothDomain):
    """Ellipse with semi-axes a >= b > 0 rotated by an angle about its center."""

    def __init__(self, center=(0.0, 0.0), semi_axes=(1.0, 1.0), rotation: float = 0.0):
        a, b = (float(v) for v in semi_axes)
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise InvalidDomain(f"ellipse semi-axes must be positive, got {semi_axes}")
        if a < b:
            a, b, rotation = b, a, rotation + math.pi / 2
        self.semi_axes = (a, b)
        self.rotation = float(math.remainder(rotation, math.pi))
        self._rot = _rotation(self.rotation)
        self._scale = np.array([1.0 / a**2, 1.0 / b**2])
        c = np.asarray(center, dtype=float)
        self.center = c
        self._set_extents(c, self.outline(720))
        ct, st = math.cos(self.rotation), math.sin(self.rotation)
        hx = math.hypot(a * ct, b * st)
        hy = math.hypot(a * st, b * ct)
        self.bbox = (float(c[0] - hx), float(c[1] - hy), float(c[0] + hx), float(c[1] + hy))
        self.diameter = 2.0 * a
        self.bound_radius = a

    @classmethod
    def disk(cls, center=(0.0, 0.0), radius: float = 1.0) -> "Ellipse":
        return cls(center, (radius, radius), 0.0)

    def _local(self, points) -> np.ndarray:
        return (np.atleast_2d(np.asarray(points, dtype=float)) - self.center) @ self._rot

    def implicit_function(self, points) -> np.ndarray:
        q = self._local(points)
        return q**2 @ self._scale - 1.0

    def gradient(self, points) -> np.ndarray:
        q = self._local(points)
        return (2.0 * q * self._scale) @ self._rot.T

    def boundary_point(self, angles) -> np.ndarray:
        phi = np.asarray(angles, dtype=float)
        a, b = self.semi_axes
        local = np.stack([a * np.cos(phi), b * np.sin(phi)], axis=-1)
        return self.center + local @ self._rot.T

    def conic(self) -> np.ndarray:
        """Symmetric 3x3 matrix C with [p,1] C [p,1]^T = 0 on the boundary, < 0 inside."""
        m = self._rot @ np.diag(self._scale) @ self._rot.T
        c = self.center
        out = np.zeros((3, 3))
        out[:2, :2] = m
        out[:2, 2] = out[2, :2] = -m @ c
        out[2, 2] = c @ m @ c - 1.0
        return out

    def transformed(self, proj_map: ProjMap) -> "Ellipse":
        self._check_chart(proj_map)
        inv = np.linalg.inv(proj_map.matrix)
        image = inv.T @ self.conic() @ inv
        m, v, k = image[:2, :2], image[:2, 2], image[2, 2]
        try:
            center = -np.linalg.solve(m, v)
        except np.linalg.LinAlgError as exc:
            raise DomainOutOfChart("image conic is not an ellipse") from exc
        level = -(k + v @ center)
        if abs(level) < EPS:
            raise DomainOutOfChart("image conic is degenerate")
        eigvals, eigvecs = np.linalg.eigh(m / level)
        if eigvals[0] <= 0:
            raise DomainOutOfChart("image conic is not an ellipse")
        major = eigvecs[:, 0]
        return Ellipse(center, (1.0 / math.sqrt(eigvals[0]), 1.0 / math.sqrt(eigvals[1])), math.atan2(major[1], major[0]))

    def to_spec(self) -> EllipseSpec:
        return EllipseSpec(
            center=(float(self.center[0]), float(self.center[1])),
            semi_axes=self.semi_axes,
            rotation=self.rotation,
        )

    def __repr__(self):
        return f"Ellipse(center={tuple(self.center)}, semi_axes={self.semi_axes}, rotation={self.rotation:.6g})"


class SuperEllipse(SmoothDomain):
    """|x/a|^p + |y/b|^p < 1 in a rotated frame; strictly convex for p > 1."""

    def __init__(self, center=(0.0, 0.0), semi_axes=(1.0, 1.0), exponent: float = 4.0, rotation: float = 0.0):
        a, b = (float(v) for v in semi_axes)
        if not (a > 0 and b > 0):
            raise InvalidDomain(f"superellipse semi-axes must be positive, got {semi_axes}")
        if not exponent > 1.0:
            raise InvalidDomain(f"superellipse exponent must exceed 1, got {exponent}")
        self.semi_axes = (a, b)
        self.exponent = float(exponent)
        self.rotation = float(rotation)
        self._rot = _rotation(self.rotation)
        self._axes = np.array([a, b])
        c = np.asarray(center, dtype=float)
        self.center = c
        self._set_extents(c, self.outline(720))
        self.bound_radius = max(self.bound_radius, max(a, b))

    def _local(self, points) -> np.ndarray:
        return ((np.atleast_2d(np.asarray(points, dtype=float)) - self.center) @ self._rot) / self._axes

    def implicit_function(self, points) -> np.ndarray:
        return np.sum(np.abs(self._local(points)) ** self.exponent, axis=1) - 1.0

    def gradient(self, points) -> np.ndarray:
        q = self._local(points)
        p = self.exponent
        local = p * np.sign(q) * np.abs(q) ** (p - 1.0) / self._axes
        return local @ self._rot.T

    def boundary_point(self, angles) -> np.ndarray:
        phi = np.asarray(angles, dtype=float)
        c, s = np.cos(phi), np.sin(phi)
        e = 2.0 / self.exponent
        local = np.stack([self._axes[0] * np.sign(c) * np.abs(c) ** e, self._axes[1] * np.sign(s) * np.abs(s) ** e], axis=-1)
        return self.center + local @ self._rot.T

    def transformed(self, proj_map: ProjMap) -> ConvexDomain:
        m = proj_map.matrix
        if proj_map.is_affine:
            lin = m[:2, :2] / m[2, 2]
            shift = m[:2, 2] / m[2, 2]
            scale = math.sqrt(abs(np.linalg.det(lin)))
            similar = abs(lin[0, 0] - lin[1, 1]) <= 1e-12 * scale and abs(lin[0, 1] + lin[1, 0]) <= 1e-12 * scale
            if similar and np.linalg.det(lin) > 0:
                angle = math.atan2(lin[1, 0], lin[0, 0])
                return SuperEllipse(
                    lin @ self.center + shift,
                    (scale * self.semi_axes[0], scale * self.semi_axes[1]),
                    self.exponent,
                    self.rotation + angle,
                )
        return ProjectiveImage(self, proj_map)

    def to_spec(self) -> SuperEllipseSpec:
        return SuperEllipseSpec(
            center=(float(self.center[0]), float(self.center[1])),
            semi_axes=self.semi_axes,
            exponent=self.exponent,
            rotation=self.rotation,
        )

    def __repr__(self):
        return f"SuperEllipse(semi_axes={self.semi_axes}, exponent={self.exponent:g})"


class ProjectiveImage(SmoothDomain):
    """T(base) for a smooth base domain kept inside the finite chart by T."""

    def __init__(self, base: SmoothDomain, proj_map: ProjMap):
        if isinstance(base, ProjectiveImage):
            proj_map, base = proj_map.compose(base.proj_map), base.base
        if not isinstance(base, SmoothDomain):
            raise UnsupportedTransform(f"projective images are built over smooth domains, got {base!r}")
        base._check_chart(proj_map)
        self.base = base
        self.proj_map = proj_map
        self._inverse = proj_map.inverse().matrix
        center = proj_map.apply_affine(base.center)
        # weight sign that preimages of image points carry
        self._sign = float(np.sign(self._inverse[2] @ np.array([center[0], center[1], 1.0])))
        self._set_extents(center, self.outline(720))
        self.bound_radius *= 1.01

    def _preimage(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        h = pts @ self._inverse[:, :2].T + self._inverse[:, 2]
        w = h[:, 2] * self._sign
        valid = w > 1e-12 * np.max(np.abs(h), axis=1)
        safe = np.where(valid, h[:, 2], 1.0)
        return h[:, :2] / safe[:, None], valid

    def implicit_function(self, points) -> np.ndarray:
        pre, valid = self._preimage(points)
        return np.where(valid, self.base.implicit_function(pre), 1.0)

    def boundary_point(self, angles) -> np.ndarray:
        return self.proj_map.apply_affine(self.base.boundary_point(angles))

    def clip_line(self, bases, directions) -> tuple[np.ndarray, np.ndarray]:
        # clip the preimage line against the base, then map the endpoints back
        b = np.atleast_2d(np.asarray(bases, dtype=float))
        d = np.broadcast_to(np.atleast_2d(np.asarray(directions, dtype=float)), b.shape)
        ones = np.ones((len(b), 1))
        lines = np.cross(np.hstack([b, ones]), np.hstack([b + d, ones]))
        pre = lines @ self.proj_map.matrix
        nn = pre[:, 0] ** 2 + pre[:, 1] ** 2
        ok = nn > 1e-24 * np.sum(pre**2, axis=1)
        t_lo = np.full(len(b), np.nan)
        t_hi = np.full(len(b), np.nan)
        if not np.any(ok):
            return t_lo, t_hi
        a_, b_, c_ = pre[ok, 0], pre[ok, 1], pre[ok, 2]
        foot = -(c_ / nn[ok])[:, None] * np.stack([a_, b_], axis=1)
        along = np.stack([-b_, a_], axis=1) / np.sqrt(nn[ok])[:, None]
        s_lo, s_hi = self.base.clip_line(foot, along)
        hit = np.isfinite(s_lo) & np.isfinite(s_hi)
        if np.any(hit):
            ends_lo = self.proj_map.apply_affine(foot[hit] + s_lo[hit, None] * along[hit])
            ends_hi = self.proj_map.apply_affine(foot[hit] + s_hi[hit, None] * along[hit])
            bb, dd = b[ok][hit], d[ok][hit]
            dd2 = np.sum(dd**2, axis=1)
            t1 = np.sum((ends_lo - bb) * dd, axis=1) / dd2
            t2 = np.sum((ends_hi - bb) * dd, axis=1) / dd2
            idx = np.flatnonzero(ok)[hit]
            t_lo[idx] = np.minimum(t1, t2)
            t_hi[idx] = np.maximum(t1, t2)
        return t_lo, t_hi

    def extreme_points(self):
        return self.base.extreme_points()

    def classify_shape(self) -> ShapeClass:
        return self.base.classify_shape()

    def transformed(self, proj_map: ProjMap) -> "ProjectiveImage":
        return ProjectiveImage(self, proj_map)

    def to_spec(self) -> ProjectiveImageSpec:
        return ProjectiveImageSpec(base=self.base.to_spec(), matrix=self.proj_map.to_list())

    def __repr__(self):
        return f"ProjectiveImage({self.base!r})"


# --- module-level operations ---

def contains(domain: ConvexDomain, p) -> Region:
    return domain.contains(p)


def chord_endpoints(domain: ConvexDomain, x, y) -> Chord:
    """Boundary points of line(x, y), ordered xbar, x, y, ybar along the line."""
    return domain.chord(x, y)


def extreme_points(domain: ConvexDomain):
    return domain.extreme_points()


def classify_shape(domain: ConvexDomain) -> ShapeClass:
    return domain.classify_shape()


# --- JSON ---

_domain_adapter = TypeAdapter(DomainSpec)


def domain_from_spec(spec) -> ConvexDomain:
    if isinstance(spec, PolygonSpec):
        return Polygon(spec.vertices)
    if isinstance(spec, EllipseSpec):
        return Ellipse(spec.center, spec.semi_axes, spec.rotation)
    if isinstance(spec, SuperEllipseSpec):
        return SuperEllipse(spec.center, spec.semi_axes, spec.exponent, spec.rotation)
    if isinstance(spec, ProjectiveImageSpec):
        return domain_from_spec(spec.base).transformed(ProjMap.from_list(spec.matrix))
    raise InvalidDomain(f"unknown domain spec: {spec!r}")


def parse_domain(data: dict) -> ConvexDomain:
    return domain_from_spec(_domain_adapter.validate_python(data))


def load_domain(path: Union[str, Path]) -> ConvexDomain:
    with open(path) as f:
        return parse_domain(json.load(f))


def dump_domain(domain: ConvexDomain) -> str:
    return json.dumps(domain.to_json())
