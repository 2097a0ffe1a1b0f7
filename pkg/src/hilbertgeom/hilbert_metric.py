"""The Hilbert cross-ratio metric, geodesic probes and metric balls."""

import logging
import math

import numpy as np

from .config import BALL_BISECTION_STEPS, COLLINEAR_TOL, EPS
from .convex_domain import ConvexDomain
from .errors import CoincidentPoints
from .geom_core import as_affine, cross_ratio
from .models import GeodesicReport

logger = logging.getLogger("hilbertgeom")


def distance(domain: ConvexDomain, x, y) -> float:
    """Hilbert distance in nats: ln of the cross-ratio of x, y with their chord endpoints."""
    x, y = as_affine(x), as_affine(y)
    domain.require_interior(np.array([x, y]))
    if np.linalg.norm(y - x) <= EPS:
        return 0.0
    chord = domain.chord(x, y)
    tol = COLLINEAR_TOL * max(domain.diameter, 1.0)
    return math.log(cross_ratio(x, y, chord.xbar, chord.ybar, tol=tol))


def distances(domain: ConvexDomain, xs, ys) -> np.ndarray:
    """Pairwise distances d(xs[i], ys[i]) for (N, 2) arrays."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    xs, ys = np.broadcast_arrays(xs, ys)
    domain.require_interior(xs)
    domain.require_interior(ys)
    diff = ys - xs
    length = np.linalg.norm(diff, axis=1)
    same = length <= EPS
    u = diff / np.where(same, 1.0, length)[:, None]
    u[same] = (1.0, 0.0)
    t_minus, t_plus = domain.ray_exits(xs, u)
    # ln((t+ / (t+ - L)) * ((s + L) / s)) with s = -t_minus
    d = np.log1p(length / -t_minus) - np.log1p(-length / t_plus)
    return np.where(same, 0.0, d)


def segment_additivity(domain: ConvexDomain, x, z, y) -> float:
    """d(x, z) + d(z, y) - d(x, y); zero when z lies on the segment [x, y]."""
    return distance(domain, x, z) + distance(domain, z, y) - distance(domain, x, y)


def _distance_to_segment(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    t = np.clip((points - a) @ ab / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(points - (a + t[:, None] * ab), axis=1)


def unique_geodesic_probe(
    domain: ConvexDomain,
    x,
    y,
    grid_resolution: int = 200,
    threshold: float = 1e-9,
    exclusion: float = 1e-3,
) -> GeodesicReport:
    """Smallest additivity defect over grid points farther than `exclusion` from [x, y].

    A defect below `threshold` certifies that [x, y] is not the only geodesic;
    a defect bounded away from zero is only evidence of uniqueness.
    """
    x, y = as_affine(x), as_affine(y)
    if np.linalg.norm(y - x) <= EPS:
        raise CoincidentPoints("geodesic probe needs two distinct points")
    domain.require_interior(np.array([x, y]))

    xmin, ymin, xmax, ymax = domain.bbox
    gx, gy = np.meshgrid(np.linspace(xmin, xmax, grid_resolution), np.linspace(ymin, ymax, grid_resolution))
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)
    grid = grid[domain.is_interior(grid)]
    grid = grid[_distance_to_segment(grid, x, y) > exclusion]
    logger.debug("geodesic probe: %d candidate points", len(grid))
    if len(grid) == 0:
        return GeodesicReport(additivity_defect=math.inf, grid_resolution=grid_resolution, threshold=threshold)

    n = len(grid)
    defects = (
        distances(domain, np.broadcast_to(x, (n, 2)), grid)
        + distances(domain, grid, np.broadcast_to(y, (n, 2)))
        - distance(domain, x, y)
    )
    best = int(np.argmin(defects))
    return GeodesicReport(
        additivity_defect=max(float(defects[best]), 0.0),
        witness=(float(grid[best, 0]), float(grid[best, 1])),
        grid_resolution=grid_resolution,
        candidates=n,
        threshold=threshold,
    )


def metric_ball(domain: ConvexDomain, center, radius: float, n_directions: int = 64) -> np.ndarray:
    """Closed polyline (n_directions, 2) of points at Hilbert distance `radius` from center."""
    if n_directions < 8:
        raise ValueError(f"metric ball needs at least 8 directions, got {n_directions}")
    if not radius > 0:
        raise ValueError(f"metric ball radius must be positive, got {radius}")
    c = as_affine(center)
    domain.require_interior(c)
    angles = 2.0 * math.pi * np.arange(n_directions) / n_directions
    u = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    t_minus, t_plus = domain.ray_exits(np.broadcast_to(c, u.shape), u)
    s = -t_minus

    lo = np.zeros(n_directions)
    hi = t_plus.copy()
    for _ in range(BALL_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        d = np.log1p(mid / s) - np.log1p(-mid / t_plus)
        short = d < radius
        lo = np.where(short, mid, lo)
        hi = np.where(short, hi, mid)
    t = 0.5 * (lo + hi)
    return c + t[:, None] * u
