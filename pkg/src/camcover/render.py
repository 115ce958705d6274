"""SVG scene: contours at both ends of the deformation, camera FOVs and coverage markers."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .camera import fov_polygon
from .coverage import Deployment, covered_points

STYLE = """
.contour-start { fill: none; stroke: #c0392b; stroke-width: 0.6; }
.contour-end { fill: none; stroke: #2e63b8; stroke-width: 0.6; }
.fov { fill: #2ca02c; fill-opacity: 0.12; stroke: #2ca02c; stroke-width: 0.4; }
.camera { fill: #222; }
.covered { fill: #2ca02c; }
.uncovered { fill: #d62728; }
text { font: 4px sans-serif; }
"""


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points_attr(xy) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in xy)


def render_svg(scenario, deployment: Deployment | None, t_index: int = 1, margin: float = 10.0) -> str:
    """SVG document for the scene at sample index ``t_index`` (1-based).

    World y points up; the document flips it so the picture is not mirrored.
    """
    contour = scenario.contour
    snap = contour.snapshot(t_index)
    start = contour.snapshot(1)
    end = contour.snapshot(contour.M)
    cams = deployment.cameras if deployment is not None else ()
    polys = [fov_polygon(c, deployment.intrinsics) for c in cams]

    allxy = [start[:, :2], end[:, :2], snap[:, :2]]
    allxy += [np.array(p) for p in polys]
    allxy += [np.array([c.position]) for c in cams]
    xy = np.vstack(allxy)
    x0, y0 = xy.min(axis=0) - margin
    x1, y1 = xy.max(axis=0) + margin
    w, h = x1 - x0, y1 - y0

    if deployment is not None and cams:
        flags = covered_points(deployment, snap)
    else:
        flags = np.zeros(len(snap), dtype=bool)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}" '
        f'width="{_fmt(w * 6)}" height="{_fmt(h * 6)}">',
        f"<title>{escape(scenario.name)} t{t_index}</title>",
        f"<style>{STYLE}</style>",
        f'<g id="fovs" data-count="{len(polys)}">',
    ]
    for i, poly in enumerate(polys, start=1):
        out.append(f'<polygon class="fov" data-camera="{i}" points="{_points_attr(poly)}"/>')
    out.append("</g>")
    closed_start = np.vstack([start[:, :2], start[:1, :2]])
    closed_end = np.vstack([end[:, :2], end[:1, :2]])
    out.append(f'<polyline class="contour-start" points="{_points_attr(closed_start)}"/>')
    out.append(f'<polyline class="contour-end" points="{_points_attr(closed_end)}"/>')
    out.append(f'<g id="points" data-covered="{int(flags.sum())}" data-total="{len(flags)}">')
    for k, ((x, y, _), ok) in enumerate(zip(snap, flags), start=1):
        cls = "covered" if ok else "uncovered"
        out.append(f'<circle class="{cls}" data-k="{k}" cx="{_fmt(x)}" cy="{_fmt(-y)}" r="0.7"/>')
    out.append("</g>")
    out.append('<g id="cameras">')
    for i, c in enumerate(cams, start=1):
        out.append(f'<circle class="camera" cx="{_fmt(c.vx)}" cy="{_fmt(-c.vy)}" r="1.5"/>')
        out.append(f'<text x="{_fmt(c.vx + 2)}" y="{_fmt(-c.vy - 2)}">c{i}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
