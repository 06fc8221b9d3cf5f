"""Static SVG renderings of one- and two-dimensional instances.

Plots are a convenience for eyeballing piecewise structure; nothing
downstream consumes them.  Output is a pure function of the input:
exact vertices are computed first, then formatted with fixed precision.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .errors import EmptySetError, InvalidParameterError
from .functions import PolyhedralFunction
from .polyhedron import Polyhedron, intersect
from .rationals import Vec, vec

WIDTH, HEIGHT, MARGIN = 480.0, 360.0, 40.0
WINDOW = Fraction(8)

PALETTE = ("#dce8f5", "#f5e8dc", "#e2f2de", "#f2def0", "#e8e8e8")


def _clip_window(p: Polyhedron) -> Polyhedron:
    box = Polyhedron.box(
        tuple(-WINDOW for _ in range(p.dim)), tuple(WINDOW for _ in range(p.dim))
    )
    return intersect(p, box)


def _bounds(points: Sequence[Vec]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    pad_x = max((hi_x - lo_x) / 10, Fraction(1))
    pad_y = max((hi_y - lo_y) / 10, Fraction(1))
    return lo_x - pad_x, hi_x + pad_x, lo_y - pad_y, hi_y + pad_y


def _mapper(points: Sequence[Vec]):
    lo_x, hi_x, lo_y, hi_y = _bounds(points)
    sx = (WIDTH - 2 * MARGIN) / float(hi_x - lo_x)
    sy = (HEIGHT - 2 * MARGIN) / float(hi_y - lo_y)

    def to_canvas(p: Vec) -> tuple[float, float]:
        cx = MARGIN + (float(p[0]) - float(lo_x)) * sx
        cy = HEIGHT - MARGIN - (float(p[1]) - float(lo_y)) * sy
        return cx, cy

    return to_canvas


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _svg(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" '
        f'height="{HEIGHT:.0f}" viewBox="0 0 {WIDTH:.0f} {HEIGHT:.0f}">'
    )
    frame = (
        f'<rect x="0.5" y="0.5" width="{WIDTH - 1:.0f}" height="{HEIGHT - 1:.0f}" '
        'fill="white" stroke="#999"/>'
    )
    return "\n".join([head, frame, *body, "</svg>"]) + "\n"


def _order_polygon(pts: Sequence[Vec]) -> list[Vec]:
    """Counterclockwise vertex order by exact cross-product comparison."""
    if len(pts) <= 2:
        return sorted(pts)
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def half(p: Vec) -> int:
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def compare(p: Vec, q: Vec) -> int:
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        if cross == 0:
            return -1 if p < q else (1 if p > q else 0)
        return -1 if cross > 0 else 1

    return sorted(pts, key=cmp_to_key(compare))


def _polygon_tag(pts: Sequence[Vec], to_canvas, fill: str, stroke: str) -> str:
    coords = " ".join(
        ",".join(map(_fmt, to_canvas(p))) for p in _order_polygon(pts)
    )
    return f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}"/>'


def _curve_breakpoints(g: PolyhedralFunction) -> list[Fraction]:
    window = _clip_window(g.domain)
    if window.is_empty:
        raise EmptySetError("nothing lies inside the plotting window")
    xs = {v[0] for v in window.vertices}
    lo, hi = min(xs), max(xs)
    for i, (a_i, b_i) in enumerate(g.pieces):
        for a_j, b_j in g.pieces[i + 1:]:
            if a_i[0] != a_j[0]:
                t = (b_j - b_i) / (a_i[0] - a_j[0])
                if lo <= t <= hi:
                    xs.add(t)
    return sorted(xs)


def plot_function(f: PolyhedralFunction, conjugate: bool = False) -> str:
    g = f.conjugate() if conjugate else f
    if g.dim == 1:
        knots = _curve_breakpoints(g)
        curve = [(t, g.eval_finite((t,))) for t in knots]
        to_canvas = _mapper(curve)
        path = "M " + " L ".join(
            ",".join(map(_fmt, to_canvas(p))) for p in curve
        )
        axis_pts = [to_canvas((t, Fraction(0))) for t in (knots[0], knots[-1])]
        body = [
            f'<line x1="{_fmt(axis_pts[0][0])}" y1="{_fmt(axis_pts[0][1])}" '
            f'x2="{_fmt(axis_pts[1][0])}" y2="{_fmt(axis_pts[1][1])}" stroke="#bbb"/>',
            f'<path d="{path}" fill="none" stroke="#1f4e8c" stroke-width="2"/>',
        ]
        return _svg(body)
    if g.dim == 2:
        window = _clip_window(g.domain)
        if window.is_empty:
            raise EmptySetError("nothing lies inside the plotting window")
        cells: list[list[Vec]] = []
        for k, (a_k, b_k) in enumerate(g.pieces):
            rows = [
                (tuple(a_j[c] - a_k[c] for c in range(2)), b_k - b_j)
                for j, (a_j, b_j) in enumerate(g.pieces)
                if j != k
            ]
            cell = intersect(window, Polyhedron.from_hrep(2, rows))
            if not cell.is_empty and len(cell.vertices) >= 3:
                cells.append(list(cell.vertices))
        to_canvas = _mapper([v for cell in cells for v in cell] or window.vertices)
        body = [
            _polygon_tag(cell, to_canvas, PALETTE[i % len(PALETTE)], "#666")
            for i, cell in enumerate(cells)
        ]
        body.append(_polygon_tag(window.vertices, to_canvas, "none", "#1f4e8c"))
        return _svg(body)
    raise InvalidParameterError("plots cover dimensions 1 and 2 only")


def plot_subdiff(f: PolyhedralFunction, x: Sequence, eps) -> str:
    x = vec(x)
    s = f.eps_subdifferential(x, eps)
    if s.is_empty:
        raise EmptySetError("the subdifferential is empty at this point")
    clipped = _clip_window(s)
    if s.dim == 1:
        xs = sorted(v[0] for v in clipped.vertices)
        pts = [(t, Fraction(0)) for t in (xs[0] - 1, xs[-1] + 1)]
        to_canvas = _mapper(pts)
        a = to_canvas((xs[0], Fraction(0)))
        b = to_canvas((xs[-1], Fraction(0)))
        body = [
            f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(a[1])}" '
            f'x2="{_fmt(WIDTH - MARGIN)}" y2="{_fmt(a[1])}" stroke="#bbb"/>',
            f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
            f'y2="{_fmt(b[1])}" stroke="#8c1f2e" stroke-width="4"/>',
        ]
        for t in (a, b):
            body.append(
                f'<circle cx="{_fmt(t[0])}" cy="{_fmt(t[1])}" r="4" fill="#8c1f2e"/>'
            )
        return _svg(body)
    if s.dim == 2:
        verts = list(clipped.vertices)
        if len(verts) == 1:
            to_canvas = _mapper([(verts[0][0] - 1, verts[0][1] - 1),
                                 (verts[0][0] + 1, verts[0][1] + 1)])
            cx, cy = to_canvas(verts[0])
            return _svg(
                [f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="5" fill="#8c1f2e"/>']
            )
        to_canvas = _mapper(verts)
        if len(verts) == 2:
            a, b = (to_canvas(v) for v in verts)
            return _svg([
                f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                f'y2="{_fmt(b[1])}" stroke="#8c1f2e" stroke-width="4"/>'
            ])
        return _svg([_polygon_tag(verts, to_canvas, "#f5dcdc", "#8c1f2e")])
    raise InvalidParameterError("plots cover dimensions 1 and 2 only")
