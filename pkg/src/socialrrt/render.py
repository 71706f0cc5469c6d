"""Static SVG rendering of a scenario and a planned path."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import kernels
from .social import agf_contour
from .world import Disc, Rect

SCALE = 50.0  # pixels per metre
MARGIN = 10.0


def _n(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, bounds):
        self.xmin, self.ymin, self.xmax, self.ymax = bounds
        self.width = (self.xmax - self.xmin) * SCALE + 2 * MARGIN
        self.height = (self.ymax - self.ymin) * SCALE + 2 * MARGIN

    def x(self, v):
        return _n((v - self.xmin) * SCALE + MARGIN)

    def y(self, v):
        # SVG y grows downward
        return _n((self.ymax - v) * SCALE + MARGIN)

    def pts(self, arr):
        return " ".join(f"{self.x(p[0])},{self.y(p[1])}" for p in arr)


def svg_document(scenario, result=None, pose_every: int = 3) -> str:
    """SVG text for ``scenario`` with the path of ``result`` (optional) drawn on top."""
    b = scenario.world.bounds
    c = _Canvas((b.xmin, b.ymin, b.xmax, b.ymax))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(c.width)}" height="{_n(c.height)}" '
        f'viewBox="0 0 {_n(c.width)} {_n(c.height)}">',
        f'<g id="bounds"><rect x="{c.x(b.xmin)}" y="{c.y(b.ymax)}" width="{_n((b.xmax - b.xmin) * SCALE)}" '
        f'height="{_n((b.ymax - b.ymin) * SCALE)}" fill="white" stroke="black" stroke-width="2"/></g>',
        '<g id="obstacles" fill="#888" stroke="none">',
    ]
    for ob in scenario.world.obstacles:
        if isinstance(ob, Rect):
            out.append(f'<rect x="{c.x(ob.xmin)}" y="{c.y(ob.ymax)}" width="{_n((ob.xmax - ob.xmin) * SCALE)}" '
                       f'height="{_n((ob.ymax - ob.ymin) * SCALE)}"/>')
        elif isinstance(ob, Disc):
            out.append(f'<circle cx="{c.x(ob.x)}" cy="{c.y(ob.y)}" r="{_n(ob.radius * SCALE)}"/>')
    out.append("</g>")

    persons = scenario.persons
    if persons:
        out.append('<g id="persons" fill="#d33" stroke="black" stroke-width="1">')
        for p in persons:
            hx = p.x + p.body_radius * np.cos(p.theta)
            hy = p.y + p.body_radius * np.sin(p.theta)
            out.append(f'<circle cx="{c.x(p.x)}" cy="{c.y(p.y)}" r="{_n(p.body_radius * SCALE)}"/>')
            out.append(f'<line x1="{c.x(p.x)}" y1="{c.y(p.y)}" x2="{c.x(hx)}" y2="{c.y(hy)}"/>')
        out.append("</g>")
        contours = [agf_contour(p) for p in persons if 0 < p.tau < 1]
        if contours:
            out.append('<g id="agf-contours" fill="none" stroke="#d33" stroke-dasharray="4 3">')
            for poly in contours:
                out.append(f'<polygon points="{c.pts(poly)}"/>')
            out.append("</g>")

    if result is not None and result.success and result.waypoints:
        W = np.array([w.as_array() for w in result.waypoints])
        out.append(f'<g id="path"><polyline points="{c.pts(W[:, :2])}" fill="none" stroke="#06c" stroke-width="2"/></g>')
        idx = list(range(0, len(W), max(1, int(pose_every))))
        if idx[-1] != len(W) - 1:
            idx.append(len(W) - 1)
        pts = kernels.forward_points(W[idx], scenario.robot.as_array(), scenario.object.as_array())
        r = scenario.robot.base_radius
        out.append('<g id="poses" fill="none" stroke="#333" stroke-width="1">')
        for row in pts:
            out.append(f'<circle cx="{c.x(row[0, 0])}" cy="{c.y(row[0, 1])}" r="{_n(r * SCALE)}"/>')
            out.append(f'<polyline points="{c.pts(row[:3])}" stroke="#555"/>')
            out.append(f'<polyline points="{c.pts(row[2:])}" stroke="#a60" stroke-width="2"/>')
        out.append("</g>")

    s = scenario.start
    gx, gy = scenario.goal_base
    out.append('<g id="markers">')
    out.append(f'<circle cx="{c.x(s.x_base)}" cy="{c.y(s.y_base)}" r="6" fill="#2a2"/>')
    out.append(f'<circle cx="{c.x(gx)}" cy="{c.y(gy)}" r="6" fill="#a2a"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(scenario, result, out_path, pose_every: int = 3) -> Path:
    path = Path(out_path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg_document(scenario, result, pose_every))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path
