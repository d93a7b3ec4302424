"""SVG drawings of a polygon over the surrounding lattice points.

Drawing uses floating-point approximations of the coordinates and is pure
presentation; nothing here feeds back into certification.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .kernel import Polygon
from .lattice import LatticeSpec
from .scalar import to_float

__all__ = ["render_svg"]

MAX_GRID_POINTS = 4000
SIZE = 480
PAD = 40


def _axis_position(spec: LatticeSpec, axis: int, index: int, log_scale: bool) -> float:
    if log_scale:
        if spec.is_exponential:
            return index * math.log(to_float(spec.base(axis)))
        return math.log(float(spec.value(axis, index)))
    return to_float(spec.value(axis, index))


def render_svg(polygon: Polygon, log_scale: bool = True) -> str:
    spec = polygon.spec
    us = [p.u for p in polygon.vertices]
    vs = [p.v for p in polygon.vertices]
    u_lo, u_hi = max(0, min(us) - 1), max(us) + 1
    v_lo, v_hi = max(0, min(vs) - 1), max(vs) + 1
    n_axis = spec.axis_length()
    if n_axis is not None:
        u_hi, v_hi = min(u_hi, n_axis - 1), min(v_hi, n_axis - 1)
    grid = []
    if (u_hi - u_lo + 1) * (v_hi - v_lo + 1) <= MAX_GRID_POINTS:
        grid = [(u, v) for u in range(u_lo, u_hi + 1) for v in range(v_lo, v_hi + 1)]
    xs = {u: _axis_position(spec, 0, u, log_scale) for u in {*us, *(g[0] for g in grid)}}
    ys = {v: _axis_position(spec, 1, v, log_scale) for v in {*vs, *(g[1] for g in grid)}}
    x0, x1 = min(xs.values()), max(xs.values())
    y0, y1 = min(ys.values()), max(ys.values())
    sx = (SIZE - 2 * PAD) / ((x1 - x0) or 1.0)
    sy = (SIZE - 2 * PAD) / ((y1 - y0) or 1.0)

    def pt(u, v):
        return PAD + (xs[u] - x0) * sx, SIZE - PAD - (ys[v] - y0) * sy

    scale = "log-log" if log_scale else "linear"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(str(spec))}: {len(polygon)} vertices ({scale}, approximate positions)</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for u, v in grid:
        x, y = pt(u, v)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="#999"/>')
    path = " ".join(f"{x:.2f},{y:.2f}" for x, y in (pt(p.u, p.v) for p in polygon.vertices))
    out.append(f'<polygon points="{path}" fill="#4a90d9" fill-opacity="0.25" stroke="#1f4e8c"/>')
    for p in polygon.vertices:
        x, y = pt(p.u, p.v)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="#1f4e8c"/>')
        out.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="10">({p.u},{p.v})</text>')
    out.append(f'<text x="{PAD}" y="{SIZE - 10}" font-size="11">{escape(str(spec))}, '
               f'{scale} axes, positions approximate</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
