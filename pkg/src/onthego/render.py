"""Standalone SVG frames of a run: obstacles, covered path, planned remainder.

2-D workspaces are drawn top-down. 3-D workspaces use a fixed orthographic view
and the painter's algorithm: box faces and path segments are sorted by depth
and drawn back to front, so a path passing behind a bar is hidden by it.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .environment import Environment, ObstacleKind

SCALE_2D = 60.0
SCALE_3D = 40.0
MARGIN = 20.0
AZIMUTH = math.radians(-55.0)
ELEVATION = math.radians(25.0)

OBSTACLE_FILL = {
    ObstacleKind.STATIC: "#d62728",
    ObstacleKind.RANDOM: "#e8513a",
    ObstacleKind.ADVERSARIAL: "#a50f15",
}
PATH_COLOR = "#1f77b4"
START_COLOR = "#800080"
GOAL_COLOR = "#2ca02c"


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _points(pts) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)


def _header(width: float, height: float, title: str | None) -> list[str]:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect class="background" x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="white"/>')
    return out


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _marker(cls: str, xy, color: str) -> str:
    return f'<circle class="{cls}" cx="{_f(xy[0])}" cy="{_f(xy[1])}" r="6" fill="{color}" stroke="black" stroke-width="0.8"/>'


def render_frame(
    env: Environment,
    covered: Sequence[Sequence[float]],
    planned: Sequence[Sequence[float]] = (),
    start: Sequence[float] | None = None,
    goal: Sequence[float] | None = None,
    title: str | None = None,
) -> str:
    """SVG document for one snapshot. States may carry extra components past the position."""
    if env.dim == 2:
        return _render_2d(env, covered, planned, start, goal, title)
    if env.dim == 3:
        return _render_3d(env, covered, planned, start, goal, title)
    raise ValueError(f"can only render 2-D or 3-D workspaces, got {env.dim}-D")


def _render_2d(env, covered, planned, start, goal, title) -> str:
    (x0, y0), (x1, y1) = env.workspace.lower, env.workspace.upper
    width = 2 * MARGIN + (x1 - x0) * SCALE_2D
    height = 2 * MARGIN + (y1 - y0) * SCALE_2D

    def px(p):
        return (MARGIN + (p[0] - x0) * SCALE_2D, MARGIN + (y1 - p[1]) * SCALE_2D)

    out = _header(width, height, title)
    out.append(
        f'<rect class="workspace" x="{_f(MARGIN)}" y="{_f(MARGIN)}" width="{_f((x1 - x0) * SCALE_2D)}" '
        f'height="{_f((y1 - y0) * SCALE_2D)}" fill="none" stroke="black" stroke-width="1"/>'
    )
    for ob in env.obstacles:
        (ax, ay), (bx, by) = ob.box.lower, ob.box.upper
        left, top = px((ax, by))
        out.append(
            f'<rect class="obstacle" data-id="{ob.id}" x="{_f(left)}" y="{_f(top)}" '
            f'width="{_f((bx - ax) * SCALE_2D)}" height="{_f((by - ay) * SCALE_2D)}" '
            f'fill="{OBSTACLE_FILL[ob.kind]}" fill-opacity="0.85"/>'
        )
    if len(planned) > 1:
        out.append(
            f'<polyline class="planned" points="{_points(px(p) for p in planned)}" fill="none" '
            f'stroke="{PATH_COLOR}" stroke-opacity="0.3" stroke-width="2"/>'
        )
    if len(covered) > 1:
        out.append(
            f'<polyline class="covered" points="{_points(px(p) for p in covered)}" fill="none" '
            f'stroke="{PATH_COLOR}" stroke-width="2.5"/>'
        )
    if start is not None:
        out.append(_marker("start", px(start), START_COLOR))
    if goal is not None:
        out.append(_marker("goal", px(goal), GOAL_COLOR))
    if covered:
        out.append(_marker("agent", px(covered[-1]), PATH_COLOR).replace('r="6"', 'r="4"'))
    out.append("</svg>")
    return "\n".join(out) + "\n"


class _View:
    def __init__(self, env: Environment):
        az, el = AZIMUTH, ELEVATION
        self.right = np.array([-math.sin(az), math.cos(az), 0.0])
        self.up = np.array([-math.sin(el) * math.cos(az), -math.sin(el) * math.sin(az), math.cos(el)])
        self.toward = np.array([math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)])
        corners = np.array(_box_corners(env.workspace.lower, env.workspace.upper))
        sx, sy = corners @ self.right, corners @ self.up
        self.xmin, self.ymax = sx.min(), sy.max()
        self.width = 2 * MARGIN + (sx.max() - sx.min()) * SCALE_3D
        self.height = 2 * MARGIN + (sy.max() - sy.min()) * SCALE_3D

    def xy(self, p) -> tuple[float, float]:
        p = np.asarray(p[:3], dtype=float)
        return (
            MARGIN + (p @ self.right - self.xmin) * SCALE_3D,
            MARGIN + (self.ymax - p @ self.up) * SCALE_3D,
        )

    def depth(self, p) -> float:
        return float(np.asarray(p[:3], dtype=float) @ self.toward)


def _box_corners(lo, hi):
    return [(x, y, z) for x in (lo[0], hi[0]) for y in (lo[1], hi[1]) for z in (lo[2], hi[2])]


def _box_faces(lo, hi):
    """(outward normal, four corners) for each face of the box."""
    faces = []
    for axis in range(3):
        a, b = [i for i in range(3) if i != axis]
        for side, val in ((-1.0, lo[axis]), (1.0, hi[axis])):
            quad = []
            for ua, ub in ((lo[a], lo[b]), (hi[a], lo[b]), (hi[a], hi[b]), (lo[a], hi[b])):
                p = [0.0, 0.0, 0.0]
                p[axis], p[a], p[b] = val, ua, ub
                quad.append(tuple(p))
            normal = np.zeros(3)
            normal[axis] = side
            faces.append((normal, quad))
    return faces


def _render_3d(env, covered, planned, start, goal, title) -> str:
    view = _View(env)
    out = _header(view.width, view.height, title)

    lo, hi = env.workspace.lower, env.workspace.upper
    for normal, quad in _box_faces(lo, hi):
        # back walls of the workspace as a light wireframe
        if normal @ view.toward < 0:
            out.append(
                f'<polygon class="workspace" points="{_points(view.xy(p) for p in quad)}" '
                f'fill="#f4f4f4" stroke="#999999" stroke-width="0.6"/>'
            )

    items = []  # (depth, sequence, svg)
    seq = 0
    for ob in env.obstacles:
        for normal, quad in _box_faces(ob.box.lower, ob.box.upper):
            facing = float(normal @ view.toward)
            if facing <= 0:
                continue
            shade = 0.55 + 0.45 * facing
            centroid = np.mean(quad, axis=0)
            items.append(
                (
                    view.depth(centroid),
                    seq,
                    f'<polygon class="obstacle" data-id="{ob.id}" points="{_points(view.xy(p) for p in quad)}" '
                    f'fill="{OBSTACLE_FILL[ob.kind]}" fill-opacity="{_f(shade)}" stroke="#5a0000" stroke-width="0.4"/>',
                )
            )
            seq += 1
    for cls, pts, style in (
        ("planned", planned, 'stroke-opacity="0.3" stroke-width="2"'),
        ("covered", covered, 'stroke-width="2.5"'),
    ):
        for p, q in zip(pts, pts[1:]):
            mid = 0.5 * (np.asarray(p[:3], dtype=float) + np.asarray(q[:3], dtype=float))
            (ax, ay), (bx, by) = view.xy(p), view.xy(q)
            items.append(
                (
                    view.depth(mid),
                    seq,
                    f'<line class="{cls}" x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
                    f'stroke="{PATH_COLOR}" {style} stroke-linecap="round"/>',
                )
            )
            seq += 1
    items.sort(key=lambda t: (t[0], t[1]))
    out.extend(svg for _, _, svg in items)

    if start is not None:
        out.append(_marker("start", view.xy(start), START_COLOR))
    if goal is not None:
        out.append(_marker("goal", view.xy(goal), GOAL_COLOR))
    if covered:
        out.append(_marker("agent", view.xy(covered[-1]), PATH_COLOR).replace('r="6"', 'r="4"'))
    out.append("</svg>")
    return "\n".join(out) + "\n"
