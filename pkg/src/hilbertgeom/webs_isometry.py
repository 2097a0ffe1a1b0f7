"""Pencils, line webs and the isometry classifier.

An isometry carries lines through extreme points to lines. Webs of such lines
are sampled, pushed through the map and tested for straightness; a projective
fit over all samples then separates projective from non-projective isometries.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from . import config
from .config import COLLINEAR_TOL
from .convex_domain import Chord, ConvexDomain, Region, ShapeClass, domain_from_spec
from .errors import (
    DegenerateConfiguration,
    DegenerateQuadrilateral,
    InsufficientSamples,
    InvalidWeb,
    NotEnoughExtremePoints,
    NotInjective,
    PoleInsideDomain,
    SampleOutsideDomain,
)
from .geom_core import HomPoint, ProjLine, ProjMap, collinearity_defect, fit_projective, general_position_order
from .hilbert_metric import distances
from .models import ClassificationReport, SampledMapSpec, SamplingConfig, Thresholds, Verdict

logger = logging.getLogger("hilbertgeom")

# Fan fractions stay off rational subdivisions of the fan, where the lines
# through two poles of a regular polygon sit.
_FAN_OFFSET = math.sqrt(2.0) - 1.0
# Direction of the parallel family completing the triangle 4-web
_TRIANGLE_WEB_ANGLE = 0.37
_PATCH_GRID = 8
_GLUE_SAMPLES = 9


def _fan_fractions(n: int) -> np.ndarray:
    return (np.arange(n) + _FAN_OFFSET) / n


def pencil_lines(pole: HomPoint, domain: ConvexDomain, n: int) -> list[Chord]:
    """n chords of the domain on lines through the pole, fanned across the domain.

    For a pole at infinity the chords are parallel. xbar is the endpoint nearer the pole.
    """
    if n < 2:
        raise ValueError(f"a pencil needs at least 2 lines, got {n}")
    outline = domain.outline(720)
    if pole.is_finite:
        apex = pole.to_affine()
        if domain.contains(apex) == Region.INTERIOR:
            raise PoleInsideDomain(f"pole {tuple(apex)} lies inside the domain")
        rel = outline - apex
        rel = rel[np.linalg.norm(rel, axis=1) > 1e-9 * domain.diameter]
        axis = domain.center - apex
        base_angle = math.atan2(axis[1], axis[0])
        rel_angles = np.arctan2(axis[0] * rel[:, 1] - axis[1] * rel[:, 0], rel @ axis)
        lo, hi = float(rel_angles.min()), float(rel_angles.max())
        angles = base_angle + lo + _fan_fractions(n) * (hi - lo)
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        bases = np.broadcast_to(apex, directions.shape)
    else:
        d = pole.array[:2] / np.linalg.norm(pole.array[:2])
        normal = np.array([-d[1], d[0]])
        offsets = outline @ normal
        lo, hi = float(offsets.min()), float(offsets.max())
        bases = (lo + _fan_fractions(n) * (hi - lo))[:, None] * normal
        directions = np.broadcast_to(d, bases.shape)
    t_lo, t_hi = domain.clip_line(bases, directions)
    if np.any(~np.isfinite(t_lo)) or np.any(~np.isfinite(t_hi)):
        raise DegenerateConfiguration("a pencil line misses the domain")
    return [Chord(b + lo_ * d, b + hi_ * d) for b, d, lo_, hi_ in zip(bases, directions, t_lo, t_hi)]


@dataclass(frozen=True, eq=False)
class Pencil:
    """Lines through a common pole, clipped to a domain."""

    pole: HomPoint
    domain: ConvexDomain
    n_lines: int

    def lines(self) -> list[Chord]:
        return pencil_lines(self.pole, self.domain, self.n_lines)


@dataclass(frozen=True, eq=False)
class Web:
    """Two or more pencils over one domain with distinct poles and no shared line."""

    families: tuple[Pencil, ...]

    def __post_init__(self):
        families = tuple(self.families)
        object.__setattr__(self, "families", families)
        if len(families) < 2:
            raise InvalidWeb("a web needs at least two families")
        domain = families[0].domain
        if any(f.domain is not domain for f in families):
            raise InvalidWeb("web families must share one domain")
        for a, b in itertools.combinations(families, 2):
            if a.pole == b.pole:
                raise InvalidWeb(f"two families share the pole {a.pole!r}")
        chords = [f.lines() for f in families]
        object.__setattr__(self, "_chords", chords)
        for i, family in enumerate(chords):
            for chord in family:
                line = ProjLine.through(HomPoint.affine(*chord.xbar), HomPoint.affine(*chord.ybar))
                for j, other in enumerate(families):
                    if j != i and line.contains(other.pole, COLLINEAR_TOL):
                        raise InvalidWeb(f"a line of family {i} passes through the pole of family {j}")

    @property
    def domain(self) -> ConvexDomain:
        return self.families[0].domain

    def chords(self) -> list[list[Chord]]:
        return self._chords

    def sample_points(self, samples_per_line: int) -> np.ndarray:
        """(lines, samples_per_line, 2) interior points at fractions k/(m+1)."""
        f = np.arange(1, samples_per_line + 1) / (samples_per_line + 1)
        return np.array([c.point_at(f) for family in self._chords for c in family])


# --- sampled maps ---

class SampledMap:
    """A candidate map between two domains: a sample table, a callable, or both.

    Tables answer exactly the source points they hold.
    """

    def __init__(
        self,
        samples,
        source: ConvexDomain,
        target: ConvexDomain,
        func: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        family: str = "",
    ):
        pairs = np.asarray(samples, dtype=float).reshape(-1, 2, 2)
        self.sources = pairs[:, 0, :].copy()
        self.targets = pairs[:, 1, :].copy()
        self.source = source
        self.target = target
        self.func = func
        self.family = family
        if len(self.sources):
            source.require_interior(self.sources, "source domain")
            target.require_interior(self.targets, "target domain")
            self._check_injective()
        self._index = {(float(x), float(y)): i for i, (x, y) in enumerate(self.sources)}

    @classmethod
    def from_callable(cls, func, source: ConvexDomain, target: ConvexDomain, family: str = "") -> "SampledMap":
        return cls(np.empty((0, 2, 2)), source, target, func=func, family=family)

    def _check_injective(self) -> None:
        # targets within tol of each other share a cell or sit in adjacent cells
        tol = 1e-12 * max(self.target.diameter, 1.0)
        cells: dict[tuple[float, float], list[int]] = {}
        for i, (cx, cy) in enumerate(np.floor(self.targets / tol)):
            for dx, dy in itertools.product((-1.0, 0.0, 1.0), repeat=2):
                for j in cells.get((cx + dx, cy + dy), ()):
                    same_target = np.max(np.abs(self.targets[i] - self.targets[j])) <= tol
                    if same_target and np.max(np.abs(self.sources[i] - self.sources[j])) > tol:
                        raise NotInjective(
                            f"sources {tuple(self.sources[j])} and {tuple(self.sources[i])} share one target"
                        )
            cells.setdefault((float(cx), float(cy)), []).append(i)

    @property
    def is_callable(self) -> bool:
        return self.func is not None

    def __len__(self) -> int:
        return len(self.sources)

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.func is not None:
            return np.asarray(self.func(pts), dtype=float).reshape(-1, 2)
        try:
            idx = [self._index[(float(x), float(y))] for x, y in pts]
        except KeyError as exc:
            raise InsufficientSamples(f"sample table has no entry for source point {exc.args[0]}") from None
        return self.targets[idx]

    def tabulate(self, points) -> "SampledMap":
        """A table-only map holding this map's values on the given points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        pts = np.unique(pts, axis=0)
        images = self.evaluate(pts)
        return SampledMap(np.stack([pts, images], axis=1), self.source, self.target, family=self.family)

    def to_spec(self, sampling: Optional[SamplingConfig] = None) -> SampledMapSpec:
        return SampledMapSpec(
            samples=[((float(s[0]), float(s[1])), (float(t[0]), float(t[1]))) for s, t in zip(self.sources, self.targets)],
            source=self.source.to_spec(),
            target=self.target.to_spec(),
            family=self.family,
            sampling=sampling,
        )


def parse_sampled_map(data: dict) -> tuple[SampledMap, Optional[SamplingConfig]]:
    spec = SampledMapSpec.model_validate(data)
    smap = SampledMap(spec.samples, domain_from_spec(spec.source), domain_from_spec(spec.target), family=spec.family)
    return smap, spec.sampling


def load_sampled_map(path: Union[str, Path]) -> tuple[SampledMap, Optional[SamplingConfig]]:
    with open(path) as f:
        return parse_sampled_map(json.load(f))


# --- web checks ---

def web_image_check(web: Web, smap: SampledMap, samples_per_line: int) -> float:
    """Largest collinearity defect among the images of sampled web lines."""
    if samples_per_line < 3:
        raise ValueError(f"need at least 3 samples per line, got {samples_per_line}")
    samples = web.sample_points(samples_per_line)
    flat = samples.reshape(-1, 2)
    if not np.all(web.domain.is_interior(flat)):
        raise SampleOutsideDomain("line sampling left the source domain")
    images = smap.evaluate(flat).reshape(samples.shape)
    return max(collinearity_defect(line) for line in images)


def five_poles(domain: ConvexDomain) -> list[HomPoint]:
    """Five distinct extreme points spread around the boundary."""
    extremes = domain.extreme_points()
    if isinstance(extremes, list):
        m = len(extremes)
        if m < 5:
            raise NotEnoughExtremePoints(f"domain has {m} extreme points; five are needed")
        return [HomPoint.affine(*extremes[(k * m) // 5]) for k in range(5)]
    points = domain.boundary_point(2.0 * math.pi * np.arange(5) / 5)
    return [HomPoint.affine(*p) for p in points]


def triangle_web_poles(domain: ConvexDomain) -> list[HomPoint]:
    """The three vertices plus a point at infinity off every edge direction."""
    vertices = domain.extreme_points()
    edge = vertices[1] - vertices[0]
    angle = math.atan2(edge[1], edge[0]) + _TRIANGLE_WEB_ANGLE
    return [HomPoint.affine(*v) for v in vertices] + [HomPoint.at_infinity(math.cos(angle), math.sin(angle))]


def web_poles(domain: ConvexDomain) -> list[HomPoint]:
    """Poles of the web the classifier tests for this shape class."""
    shape = domain.classify_shape()
    if shape == ShapeClass.TRIANGLE:
        return triangle_web_poles(domain)
    if shape == ShapeClass.QUADRILATERAL:
        return [HomPoint.affine(*v) for v in domain.extreme_points()]
    return five_poles(domain)


def shape_web(domain: ConvexDomain, lines_per_pole: int) -> Web:
    return Web(tuple(Pencil(p, domain, lines_per_pole) for p in web_poles(domain)))


def pencil_groups(pole: HomPoint, domain: ConvexDomain, points: np.ndarray, tol: float) -> list[np.ndarray]:
    """Index groups of three or more points lying within tol of one line through the pole."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pole.is_finite:
        apex = pole.to_affine()
        rel = pts - apex
        norms = np.linalg.norm(rel, axis=1)
        keep = np.flatnonzero(norms > tol)
        rel, unit = rel[keep], rel[keep] / norms[keep, None]
        axis = domain.center - apex
        key = np.arctan2(axis[0] * unit[:, 1] - axis[1] * unit[:, 0], unit @ axis)

        def off_line(i: int, j: int) -> float:
            return abs(unit[i, 0] * rel[j, 1] - unit[i, 1] * rel[j, 0])

    else:
        d = pole.array[:2] / np.linalg.norm(pole.array[:2])
        keep = np.arange(len(pts))
        key = pts @ np.array([-d[1], d[0]])

        def off_line(i: int, j: int) -> float:
            return abs(key[j] - key[i])

    if len(keep) == 0:
        return []
    order = np.argsort(key, kind="stable")
    groups, current = [], [int(order[0])]
    for j in order[1:]:
        if off_line(current[0], int(j)) <= tol:
            current.append(int(j))
        else:
            groups.append(current)
            current = [int(j)]
    groups.append(current)
    return [keep[np.array(g)] for g in groups if len(g) >= 3]


def table_web_check(table: SampledMap) -> tuple[float, int]:
    """Straightness of the table's images along web lines found among its own samples.

    Returns the largest collinearity defect and the number of lines used.
    """
    domain = table.source
    tol = COLLINEAR_TOL * max(domain.diameter, 1.0)
    lines = [g for pole in web_poles(domain) for g in pencil_groups(pole, domain, table.sources, tol)]
    if not lines:
        raise InsufficientSamples("no line through a web pole carries three samples of the table")
    defect = max(collinearity_defect(table.targets[g]) for g in lines)
    logger.debug("table web: %d lines, defect %.3e", len(lines), defect)
    return defect, len(lines)


def five_pole_check(
    domain: ConvexDomain,
    smap: SampledMap,
    lines_per_pole: int = config.LINES_PER_POLE,
    samples_per_line: int = config.SAMPLES_PER_LINE,
) -> tuple[float, list[HomPoint]]:
    """Straightness defect of the images of five pencils through extreme points."""
    if domain.classify_shape() in (ShapeClass.TRIANGLE, ShapeClass.QUADRILATERAL):
        raise NotEnoughExtremePoints(f"{domain.classify_shape().value} has fewer than five extreme points")
    poles = five_poles(domain)
    web = Web(tuple(Pencil(p, domain, lines_per_pole) for p in poles))
    return web_image_check(web, smap, samples_per_line), poles


def pole_pair_lines(poles: list[HomPoint]) -> list[ProjLine]:
    return [ProjLine.through(a, b) for a, b in itertools.combinations(poles, 2)]


def intersection_points(poles: list[HomPoint]) -> list[HomPoint]:
    """Pairwise meets of the pole-pair lines, other than the poles themselves."""
    out: list[HomPoint] = []
    for l1, l2 in itertools.combinations(pole_pair_lines(poles), 2):
        try:
            p = l1.meet(l2)
        except DegenerateConfiguration:
            continue
        if any(p == q for q in poles) or any(p == q for q in out):
            continue
        out.append(p)
    return out


# --- quadrilaterals ---

class QuadPatchResult(NamedTuple):
    residuals: list[float]
    glue_defect: float
    fitted_maps: list[ProjMap]
    patch_agreement: float


def quad_triangles(quad: ConvexDomain) -> tuple[np.ndarray, list[np.ndarray]]:
    if quad.classify_shape() != ShapeClass.QUADRILATERAL:
        raise DegenerateQuadrilateral(f"expected a quadrilateral, got {quad.classify_shape().value}")
    a, b, c, d = quad.extreme_points()
    try:
        meet = ProjLine.through(HomPoint.affine(*a), HomPoint.affine(*c)).meet(
            ProjLine.through(HomPoint.affine(*b), HomPoint.affine(*d))
        )
        m = meet.to_affine()
    except (DegenerateConfiguration, ArithmeticError) as exc:
        raise DegenerateQuadrilateral("diagonals do not meet") from exc
    if quad.contains(m) != Region.INTERIOR:
        raise DegenerateQuadrilateral("diagonals do not meet inside")
    return m, [np.array([a, b, m]), np.array([b, c, m]), np.array([c, d, m]), np.array([d, a, m])]


def patch_points(triangle: np.ndarray, grid: int = _PATCH_GRID) -> np.ndarray:
    """Interior barycentric grid points (i, j, k)/grid with i, j, k >= 1."""
    weights = np.array(
        [(i, j, grid - i - j) for i in range(1, grid) for j in range(1, grid - i) if grid - i - j >= 1],
        dtype=float,
    )
    return weights / grid @ triangle


def _edge_points(start: np.ndarray, end: np.ndarray, count: int = _GLUE_SAMPLES) -> np.ndarray:
    f = np.arange(1, count + 1) / (count + 1)
    return start + f[:, None] * (end - start)


def quadrilateral_patch_points(quad: ConvexDomain) -> np.ndarray:
    m, triangles = quad_triangles(quad)
    patches = [patch_points(t) for t in triangles]
    edges = [_edge_points(t[0], m) for t in triangles]
    return np.concatenate(patches + edges)


def inside_triangle(triangle: np.ndarray, points, margin: float = 1e-9) -> np.ndarray:
    """Mask of points whose barycentric coordinates in the triangle all exceed margin."""
    a, b, c = triangle
    pts = np.atleast_2d(np.asarray(points, dtype=float))

    def side(p, q):
        return (q[0] - p[0]) * (pts[:, 1] - p[1]) - (q[1] - p[1]) * (pts[:, 0] - p[0])

    total = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    weights = np.stack([side(b, c), side(c, a), side(a, b)], axis=1) / total
    return np.all(weights > margin, axis=1)


def _patch_samples(tri: np.ndarray, smap: SampledMap) -> tuple[np.ndarray, np.ndarray]:
    if smap.is_callable:
        src = patch_points(tri)
        return src, smap.evaluate(src)
    inside = inside_triangle(tri, smap.sources)
    if np.count_nonzero(inside) < 4:
        raise InsufficientSamples(f"a diagonal triangle holds {np.count_nonzero(inside)} table samples; 4 needed")
    return smap.sources[inside], smap.targets[inside]


def quadrilateral_patch_check(quad: ConvexDomain, smap: SampledMap) -> QuadPatchResult:
    """Fit a projective map on each of the four diagonal triangles and compare them on shared edges.

    A callable is evaluated on a grid in each triangle; a table contributes the samples inside it.
    """
    m, triangles = quad_triangles(quad)
    fits, residuals = [], []
    for tri in triangles:
        src, dst = _patch_samples(tri, smap)
        order = general_position_order(src)
        fitted, residual = fit_projective((src[order], dst[order]))
        fits.append(fitted)
        residuals.append(residual)

    glue = 0.0
    # triangle k and k+1 share the half-diagonal from vertex k+1 to M
    for k in range(4):
        shared = _edge_points(triangles[(k + 1) % 4][0], m)
        here = fits[k].apply_affine(shared)
        there = fits[(k + 1) % 4].apply_affine(shared)
        glue = max(glue, float(np.max(np.linalg.norm(here - there, axis=1))))
    agreement = max(a.relative_error(b) for a, b in itertools.combinations(fits, 2))
    logger.debug("quadrilateral patches: residuals=%s glue=%.3e", residuals, glue)
    return QuadPatchResult(residuals, glue, fits, agreement)


# --- classification ---

def probe_points(domain: ConvexDomain, sampling: SamplingConfig) -> np.ndarray:
    """Every source point the classifier evaluates for this domain and sampling."""
    rng = np.random.default_rng(sampling.seed)
    parts = [domain.interior_samples(rng, 2 * sampling.pairs, sampling.margin)]
    web = shape_web(domain, sampling.lines_per_pole)
    parts.append(web.sample_points(sampling.samples_per_line).reshape(-1, 2))
    if domain.classify_shape() == ShapeClass.QUADRILATERAL:
        parts.append(quadrilateral_patch_points(domain))
    return np.concatenate(parts)


def classify_map(
    smap: SampledMap,
    pair_budget: Optional[int] = None,
    sampling: Optional[SamplingConfig] = None,
    thresholds: Optional[Thresholds] = None,
) -> ClassificationReport:
    """Sort a map into ProjectiveIsometry, NonProjectiveIsometry or NotIsometry."""
    sampling = sampling or SamplingConfig()
    if pair_budget is not None:
        sampling = sampling.model_copy(update={"pairs": pair_budget})
    thresholds = thresholds or Thresholds()
    source = smap.source

    if smap.is_callable:
        table = smap.tabulate(probe_points(source, sampling))
    else:
        table = smap
    if len(table) < max(sampling.pairs, 20):
        raise InsufficientSamples(f"map has {len(table)} samples; at least {max(sampling.pairs, 20)} needed")

    # pairs index the table in lexicographic source order, so a table and the
    # callable it was tabulated from draw the same pairs
    order = np.lexsort((table.sources[:, 1], table.sources[:, 0]))
    src, dst = table.sources[order], table.targets[order]
    rng = np.random.default_rng(sampling.seed)
    i = rng.integers(0, len(src), size=sampling.pairs)
    j = rng.integers(0, len(src), size=sampling.pairs)
    iso = float(np.max(np.abs(distances(smap.target, dst[i], dst[j]) - distances(source, src[i], src[j]))))

    shape = source.classify_shape()
    collineation, web_lines = table_web_check(table)
    patch = None
    if shape == ShapeClass.QUADRILATERAL:
        patch = quadrilateral_patch_check(source, table)
        collineation = max(collineation, patch.glue_defect, *patch.residuals)

    all_src, all_dst = table.sources, table.targets
    order = general_position_order(all_src)
    fitted, residual = fit_projective((all_src[order], all_dst[order]))

    if iso >= thresholds.isometry:
        verdict = Verdict.NOT_ISOMETRY
    elif residual < thresholds.residual and collineation < thresholds.collineation:
        verdict = Verdict.PROJECTIVE_ISOMETRY
    else:
        verdict = Verdict.NON_PROJECTIVE_ISOMETRY
    logger.info(
        "classified %s map on %s: %s (isometry %.3e, collineation %.3e, residual %.3e)",
        smap.family or "sampled", shape.value, verdict.value, iso, collineation, residual,
    )
    return ClassificationReport(
        verdict=verdict,
        shape=shape.value,
        isometry_defect=iso,
        collineation_defect=collineation,
        residual=residual,
        fitted_map=fitted.to_list(),
        patch_residuals=patch.residuals if patch else None,
        glue_defect=patch.glue_defect if patch else None,
        patch_agreement=patch.patch_agreement if patch else None,
        pairs=sampling.pairs,
        samples=len(table),
        web_lines=web_lines,
    )
