"""Projective-plane primitives: homogeneous points and lines, cross-ratio, projective maps.

Affine points are handled as numpy arrays of shape (2,) or (N, 2); the chart is
the plane w = 1 of RP^2.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .config import COLLINEAR_TOL, EPS, SINGULAR_TOL
from .errors import (
    CoincidentPoints,
    DegenerateConfiguration,
    NonCollinear,
    PointAtInfinity,
    SingularMap,
)

logger = logging.getLogger("hilbertgeom")


def _normalize(v: np.ndarray) -> np.ndarray:
    """Divide by the largest-magnitude coordinate (first one on ties)."""
    return v / v[int(np.argmax(np.abs(v)))]


@dataclass(frozen=True, eq=False)
class HomPoint:
    """A point of RP^2 in homogeneous coordinates, equal up to nonzero scale."""

    coords: tuple[float, float, float]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) != 3 or not all(math.isfinite(c) for c in coords):
            raise ValueError(f"expected three finite homogeneous coordinates, got {self.coords!r}")
        if max(abs(c) for c in coords) == 0.0:
            raise DegenerateConfiguration("homogeneous coordinates are all zero")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def affine(cls, x: float, y: float) -> "HomPoint":
        return cls((x, y, 1.0))

    @classmethod
    def at_infinity(cls, dx: float, dy: float) -> "HomPoint":
        return cls((dx, dy, 0.0))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def normalized(self) -> np.ndarray:
        return _normalize(self.array)

    @property
    def is_finite(self) -> bool:
        return abs(self.normalized()[2]) >= EPS

    def to_affine(self, eps: float = EPS) -> np.ndarray:
        n = self.normalized()
        if abs(n[2]) < eps:
            raise PointAtInfinity(f"point {self.coords} lies on the line at infinity")
        return n[:2] / n[2]

    def __eq__(self, other):
        if not isinstance(other, HomPoint):
            return NotImplemented
        return bool(np.allclose(self.normalized(), other.normalized(), rtol=0.0, atol=1e-12))

    def __repr__(self):
        return f"HomPoint({self.coords[0]:.12g}, {self.coords[1]:.12g}, {self.coords[2]:.12g})"


PointLike = Union[HomPoint, Sequence[float], np.ndarray]


def as_affine(p: PointLike) -> np.ndarray:
    """Return p as an affine chart point of shape (2,)."""
    if isinstance(p, HomPoint):
        return p.to_affine()
    arr = np.asarray(p, dtype=float)
    if arr.shape == (3,):
        return HomPoint(tuple(arr)).to_affine()
    if arr.shape != (2,):
        raise ValueError(f"expected an affine point, got shape {arr.shape}")
    return arr


def as_affine_array(points) -> np.ndarray:
    """Return points as an (N, 2) float array."""
    if isinstance(points, np.ndarray) and points.ndim == 2 and points.shape[1] == 2:
        return points.astype(float, copy=False)
    return np.array([as_affine(p) for p in points], dtype=float).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class ProjLine:
    """A line of RP^2 in line coordinates; incidence is <coeffs, point> = 0."""

    coeffs: tuple[float, float, float]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != 3 or max(abs(c) for c in coeffs) == 0.0:
            raise DegenerateConfiguration("line coordinates are all zero")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def through(cls, p: HomPoint, q: HomPoint) -> "ProjLine":
        l = np.cross(p.normalized(), q.normalized())
        if np.max(np.abs(l)) < EPS:
            raise CoincidentPoints("a line needs two distinct points")
        return cls(tuple(l))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def meet(self, other: "ProjLine") -> HomPoint:
        p = np.cross(_normalize(self.array), _normalize(other.array))
        if np.max(np.abs(p)) < EPS:
            raise DegenerateConfiguration("the two lines coincide")
        return HomPoint(tuple(p))

    def incidence(self, p: HomPoint) -> float:
        """Scale-invariant incidence value; 0 iff p lies on the line."""
        l = self.array / np.linalg.norm(self.array)
        x = p.array / np.linalg.norm(p.array)
        return float(np.dot(l, x))

    def contains(self, p: HomPoint, tol: float = COLLINEAR_TOL) -> bool:
        return abs(self.incidence(p)) <= tol


@dataclass(frozen=True, eq=False)
class ProjMap:
    """A projective transformation: a nonsingular 3x3 matrix modulo scale.

    The stored matrix is normalized to unit Frobenius norm.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float).reshape(3, 3)
        norm = np.linalg.norm(m)
        if not np.isfinite(norm) or norm == 0.0:
            raise SingularMap("projective matrix must be finite and nonzero")
        m = m / norm
        if abs(np.linalg.det(m)) < SINGULAR_TOL:
            raise SingularMap(f"projective matrix is singular (det={np.linalg.det(m):.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "ProjMap":
        return cls(np.eye(3))

    @classmethod
    def from_affine(cls, linear, translation) -> "ProjMap":
        m = np.eye(3)
        m[:2, :2] = np.asarray(linear, dtype=float)
        m[:2, 2] = np.asarray(translation, dtype=float)
        return cls(m)

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "ProjMap":
        if len(values) != 9:
            raise ValueError(f"a projective matrix needs 9 row-major entries, got {len(values)}")
        return cls(np.asarray(values, dtype=float).reshape(3, 3))

    def to_list(self) -> list[float]:
        return [float(v) for v in self.matrix.ravel()]

    def inverse(self) -> "ProjMap":
        return ProjMap(np.linalg.inv(self.matrix))

    def compose(self, other: "ProjMap") -> "ProjMap":
        """Return self after other."""
        return ProjMap(self.matrix @ other.matrix)

    @property
    def is_affine(self) -> bool:
        m = self.matrix
        return abs(m[2, 0]) <= SINGULAR_TOL * abs(m[2, 2]) and abs(m[2, 1]) <= SINGULAR_TOL * abs(m[2, 2])

    def apply(self, p: HomPoint) -> HomPoint:
        return HomPoint(tuple(_normalize(self.matrix @ p.array)))

    def weights(self, points) -> np.ndarray:
        """Third homogeneous coordinate of the images of affine points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.matrix[2, :2] + self.matrix[2, 2]

    def apply_affine(self, points, eps: float = EPS) -> np.ndarray:
        """Map affine points (shape (2,) or (N, 2)) to affine points."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        h = pts @ self.matrix[:, :2].T + self.matrix[:, 2]
        scale = np.max(np.abs(h), axis=1)
        if np.any(np.abs(h[:, 2]) < eps * scale):
            raise PointAtInfinity("a point is mapped onto the line at infinity")
        out = h[:, :2] / h[:, 2:3]
        return out[0] if single else out

    def relative_error(self, other: "ProjMap") -> float:
        """Relative Frobenius distance between the two matrices up to scale and sign."""
        a, b = self.matrix, other.matrix
        if np.sum(a * b) < 0:
            b = -b
        return float(np.linalg.norm(a - b) / np.linalg.norm(a))


def apply(proj_map: ProjMap, p: HomPoint) -> HomPoint:
    """Apply a projective map to a homogeneous point."""
    return proj_map.apply(p)


def apply_affine(proj_map: ProjMap, p: PointLike) -> np.ndarray:
    """Apply a projective map and return the affine chart image."""
    if isinstance(p, HomPoint):
        return proj_map.apply(p).to_affine()
    return proj_map.apply_affine(as_affine(p))


def collinearity_defect(points) -> float:
    """Max perpendicular distance from the points to their total-least-squares line."""
    pts = as_affine_array(points)
    if len(pts) < 3:
        return 0.0
    centered = pts - pts.mean(axis=0)
    if not np.any(centered):
        return 0.0
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    return float(np.max(np.abs(centered @ vt[-1])))


def cross_ratio(
    x: PointLike,
    y: PointLike,
    xbar: PointLike,
    ybar: PointLike,
    tol: float = COLLINEAR_TOL,
    eps: float = EPS,
) -> float:
    """The cross-ratio (x, y; xbar, ybar) = |ybar-x|/|ybar-y| * |xbar-y|/|xbar-x|."""
    px, py, pxb, pyb = (as_affine(p) for p in (x, y, xbar, ybar))
    defect = collinearity_defect(np.array([px, py, pxb, pyb]))
    if defect > tol:
        raise NonCollinear(f"cross-ratio points are not collinear (defect {defect:.3e})")
    d_ybar_y = float(np.linalg.norm(pyb - py))
    d_xbar_x = float(np.linalg.norm(pxb - px))
    if d_ybar_y < eps or d_xbar_x < eps:
        raise DegenerateConfiguration("a point coincides with its chord endpoint")
    return (float(np.linalg.norm(pyb - px)) / d_ybar_y) * (float(np.linalg.norm(pxb - py)) / d_xbar_x)


# --- projective fitting (normalized DLT) ---

def _isotropic_normalization(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Similarity moving the centroid to the origin with RMS distance sqrt(2)."""
    centroid = points.mean(axis=0)
    rms = math.sqrt(float(np.mean(np.sum((points - centroid) ** 2, axis=1))))
    if rms < EPS:
        raise DegenerateConfiguration("points are coincident")
    s = math.sqrt(2.0) / rms
    t = np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])
    return (points - centroid) * s, t


def _design_matrix(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    n = len(src)
    x, y = src[:, 0], src[:, 1]
    u, v = dst[:, 0], dst[:, 1]
    zeros, ones = np.zeros(n), np.ones(n)
    rows_u = np.stack([x, y, ones, zeros, zeros, zeros, -u * x, -u * y, -u], axis=1)
    rows_v = np.stack([zeros, zeros, zeros, x, y, ones, -v * x, -v * y, -v], axis=1)
    return np.concatenate([rows_u, rows_v])


def _split_correspondences(correspondences) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(correspondences, tuple) and len(correspondences) == 2 and isinstance(correspondences[0], np.ndarray):
        return as_affine_array(correspondences[0]), as_affine_array(correspondences[1])
    pairs = list(correspondences)
    return as_affine_array([s for s, _ in pairs]), as_affine_array([t for _, t in pairs])


def _triangle_area(a, b, c) -> float:
    return 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))


def general_position_order(points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Index order whose first four points have no three collinear.

    Greedy: farthest-point picks with a minimum triangle area relative to the
    spread of the set. Falls back to the identity order if no such quadruple is found.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 4:
        return np.arange(n)
    spread = float(np.max(np.linalg.norm(pts - pts.mean(axis=0), axis=1)))
    min_area = tol * max(spread, EPS) ** 2
    chosen = [int(np.argmax(np.linalg.norm(pts - pts.mean(axis=0), axis=1)))]
    chosen.append(int(np.argmax(np.linalg.norm(pts - pts[chosen[0]], axis=1))))
    for _ in range(2):
        best, best_score = None, 0.0
        for i in range(n):
            if i in chosen:
                continue
            areas = [_triangle_area(pts[a], pts[b], pts[i]) for a, b in itertools.combinations(chosen, 2)]
            score = min(areas)
            if score > best_score:
                best, best_score = i, score
        if best is None or best_score <= min_area:
            return np.arange(n)
        chosen.append(best)
    rest = [i for i in range(n) if i not in chosen]
    return np.array(chosen + rest)


def transfer_errors(proj_map: ProjMap, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Per-correspondence symmetric transfer error max(|T s - t|, |T^-1 t - s|)."""

    def _project(m: np.ndarray, pts: np.ndarray) -> np.ndarray:
        h = pts @ m[:, :2].T + m[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            out = h[:, :2] / h[:, 2:3]
        out[~np.isfinite(out)] = np.inf
        return out

    forward = np.linalg.norm(_project(proj_map.matrix, src) - dst, axis=1)
    backward = np.linalg.norm(_project(np.linalg.inv(proj_map.matrix), dst) - src, axis=1)
    return np.maximum(forward, backward)


def fit_projective(correspondences, rank_tol: float = 1e-10) -> tuple[ProjMap, float]:
    """Fit a projective map to >= 4 point correspondences by normalized DLT.

    Accepts a list of (source, target) pairs or a tuple of two (N, 2) arrays.
    Returns the fitted map and the max symmetric transfer error.
    """
    src, dst = _split_correspondences(correspondences)
    if len(src) < 4 or len(src) != len(dst):
        raise DegenerateConfiguration(f"need at least 4 correspondences, got {len(src)}")
    scale = max(float(np.ptp(src, axis=0).max()), EPS)
    for a, b, c in itertools.combinations(range(4), 3):
        if _triangle_area(src[a], src[b], src[c]) <= 1e-12 * scale**2:
            raise DegenerateConfiguration("three of the first four source points are collinear")

    src_n, t_src = _isotropic_normalization(src)
    dst_n, t_dst = _isotropic_normalization(dst)
    _, s, vt = np.linalg.svd(_design_matrix(src_n, dst_n))
    logger.debug("DLT singular values: %s", np.array2string(s, precision=3))
    if s.size < 8 or s[7] <= rank_tol * s[0]:
        raise DegenerateConfiguration("design matrix has rank below 8; the fit is ambiguous")
    h = vt[-1].reshape(3, 3)
    fitted = ProjMap(np.linalg.inv(t_dst) @ h @ t_src)
    residual = float(np.max(transfer_errors(fitted, src, dst)))
    return fitted, residual
