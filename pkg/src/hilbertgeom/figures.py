"""SVG figures: chords, pencils, webs, quadrilateral patches and metric balls."""

import logging
from html import escape
from typing import Iterable, Optional

import numpy as np

from .convex_domain import ConvexDomain, Region, ShapeClass
from .geom_core import HomPoint
from .hilbert_metric import metric_ball
from .webs_isometry import five_poles, intersection_points, pencil_lines, quad_triangles, shape_web

logger = logging.getLogger("hilbertgeom")

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(width).3f" height="%(height).3f" viewBox="0 0 %(width).3f %(height).3f" version="1.1" xmlns="http://www.w3.org/2000/svg">
<g transform="translate(%(trans_x).6f,%(trans_y).6f)">
<rect x="%(neg_trans_x).6f" y="%(neg_trans_y).6f" width="%(width).3f" height="%(height).3f" style="fill:#ffffff"/>
"""

POSTAMBLE = """\
</g></svg>
"""

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


class SvgCanvas:
    """Accumulates SVG elements in chart coordinates (y up), scaled by `unit` pixels."""

    def __init__(self, unit: float = 200.0):
        self.unit = unit
        self.min_x = self.max_x = self.min_y = self.max_y = None
        self.commands: list[str] = []

    def _xy(self, x: float, y: float) -> tuple[float, float]:
        return x * self.unit, -y * self.unit

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x = min(self.min_x, x)
            self.max_x = max(self.max_x, x)
            self.min_y = min(self.min_y, y)
            self.max_y = max(self.max_y, y)

    def _points(self, points: Iterable) -> str:
        out = []
        for x, y in points:
            sx, sy = self._xy(float(x), float(y))
            self.require(sx, sy)
            out.append("%.6f,%.6f" % (sx, sy))
        return " ".join(out)

    def polygon(self, points, color: str = "#000000", width: float = 1.5) -> None:
        self.commands.append(
            '<polygon points="%s" style="fill:none;stroke:%s;stroke-width:%.3f"/>' % (self._points(points), color, width)
        )

    def line(self, points, color: str = "#000000", width: float = 1.0) -> None:
        self.commands.append(
            '<polyline points="%s" style="fill:none;stroke:%s;stroke-width:%.3f"/>' % (self._points(points), color, width)
        )

    def point(self, x: float, y: float, color: str = "#000000", radius: float = 3.0) -> None:
        sx, sy = self._xy(x, y)
        self.require(sx - radius, sy - radius)
        self.require(sx + radius, sy + radius)
        self.commands.append('<circle cx="%.6f" cy="%.6f" r="%.3f" style="fill:%s"/>' % (sx, sy, radius, color))

    def text(self, x: float, y: float, label: str, color: str = "#444444") -> None:
        sx, sy = self._xy(x, y)
        self.require(sx, sy - 12)
        self.require(sx + 8 * len(label), sy)
        self.commands.append(
            '<text x="%.6f" y="%.6f" fill="%s" font-size="12" font-family="serif">%s</text>' % (sx + 4, sy - 4, color, escape(label))
        )

    def render(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1.0) * 0.05
        width = self.max_x - self.min_x + 2 * pad
        height = self.max_y - self.min_y + 2 * pad
        trans_x = -self.min_x + pad
        trans_y = -self.min_y + pad
        neg_trans_x, neg_trans_y = -trans_x, -trans_y
        return PREAMBLE % locals() + "".join(c + "\n" for c in self.commands) + POSTAMBLE

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.render())


def _outline(canvas: SvgCanvas, domain: ConvexDomain) -> None:
    canvas.polygon(domain.outline(256))


def _chords(canvas: SvgCanvas, chords, color: str) -> None:
    for c in chords:
        canvas.line([c.xbar, c.ybar], color)


def chord_figure(domain: ConvexDomain, x, y) -> SvgCanvas:
    """Two interior points and the chord endpoints of their line."""
    canvas = SvgCanvas()
    _outline(canvas, domain)
    chord = domain.chord(x, y)
    canvas.line([chord.xbar, chord.ybar], PALETTE[0])
    for p, label in ((chord.xbar, "x̄"), (np.asarray(x, float), "x"), (np.asarray(y, float), "y"), (chord.ybar, "ȳ")):
        canvas.point(float(p[0]), float(p[1]))
        canvas.text(float(p[0]), float(p[1]), label)
    return canvas


def default_pole(domain: ConvexDomain) -> HomPoint:
    """A pole outside the domain, to the right of its bounding box."""
    xmin, ymin, xmax, ymax = domain.bbox
    return HomPoint.affine(xmax + 0.5 * (xmax - xmin), 0.5 * (ymin + ymax))


def pencil_figure(domain: ConvexDomain, n_lines: int, pole: Optional[HomPoint] = None) -> SvgCanvas:
    """A pencil of chords through an external pole, with the lines drawn back to the pole."""
    pole = pole or default_pole(domain)
    canvas = SvgCanvas()
    _outline(canvas, domain)
    chords = pencil_lines(pole, domain, n_lines)
    if pole.is_finite:
        a = pole.to_affine()
        for c in chords:
            canvas.line([a, c.xbar], "#bbbbbb", 0.5)
        canvas.point(float(a[0]), float(a[1]), PALETTE[1])
        canvas.text(float(a[0]), float(a[1]), "A")
    _chords(canvas, chords, PALETTE[0])
    return canvas


def web_figure(domain: ConvexDomain, lines_per_pole: int) -> SvgCanvas:
    """The web the classifier uses for this shape, one color per family, with poles."""
    canvas = SvgCanvas()
    _outline(canvas, domain)
    web = shape_web(domain, lines_per_pole)
    for k, (pencil, chords) in enumerate(zip(web.families, web.chords())):
        _chords(canvas, chords, PALETTE[k % len(PALETTE)])
        if pencil.pole.is_finite:
            a = pencil.pole.to_affine()
            canvas.point(float(a[0]), float(a[1]), PALETTE[k % len(PALETTE)])
            canvas.text(float(a[0]), float(a[1]), f"A{k + 1}")
    if domain.classify_shape() in (ShapeClass.POLYGON_5PLUS, ShapeClass.STRICTLY_CONVEX):
        for p in intersection_points(five_poles(domain)):
            if p.is_finite and domain.contains(p.to_affine()) == Region.INTERIOR:
                q = p.to_affine()
                canvas.point(float(q[0]), float(q[1]), "#999999", 2.0)
    return canvas


def quad_figure(domain: ConvexDomain, lines_per_pole: int) -> SvgCanvas:
    """Vertex pencils of a quadrilateral and its four diagonal triangles."""
    canvas = web_figure(domain, lines_per_pole)
    m, triangles = quad_triangles(domain)
    for tri in triangles:
        canvas.polygon(tri, "#555555", 1.0)
    canvas.point(float(m[0]), float(m[1]))
    canvas.text(float(m[0]), float(m[1]), "M")
    return canvas


def ball_figure(domain: ConvexDomain, center, radii: Iterable[float], n_directions: int = 128) -> SvgCanvas:
    """Concentric Hilbert balls around a center point."""
    canvas = SvgCanvas()
    _outline(canvas, domain)
    for k, r in enumerate(radii):
        ball = metric_ball(domain, center, r, n_directions)
        canvas.polygon(ball, PALETTE[k % len(PALETTE)], 1.0)
    c = np.asarray(center, dtype=float)
    canvas.point(float(c[0]), float(c[1]))
    return canvas


FIGURES = ("chord", "pencil", "web5", "quad", "ball")


def make_figure(kind: str, domain: ConvexDomain, lines: int = 8, center=None, x=None, y=None, radius: float = 1.0) -> SvgCanvas:
    center = domain.center if center is None else center
    if kind == "chord":
        x = domain.center if x is None else x
        y = 0.5 * (domain.center + domain.outline(256)[0]) if y is None else y
        return chord_figure(domain, x, y)
    if kind == "pencil":
        return pencil_figure(domain, lines)
    if kind == "web5":
        return web_figure(domain, lines)
    if kind == "quad":
        return quad_figure(domain, lines)
    if kind == "ball":
        return ball_figure(domain, center, [radius * (k + 1) / 3 for k in range(3)])
    raise ValueError(f"unknown figure kind {kind!r}; expected one of {', '.join(FIGURES)}")
