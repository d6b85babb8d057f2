"""SVG drawing of a complex and a trajectory through it.

Styling is fixed: triangles are translucent fills, edges are lines, vertices
are labelled dots, and the trajectory is a polyline with one marker per
sample (first marker green, last red).
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .geometry import Layout, Trajectory, embed
from .simplicial import Complex, format_face

WIDTH = 640
MARGIN = 48
TRIANGLE_FILL = "#4a78c2"
TRIANGLE_OPACITY = 0.15
EDGE_STROKE = "#1f3b6e"
VERTEX_FILL = "#111111"
PATH_STROKE = "#d9480f"
MARKER_RADIUS = 3.5


class _Frame:
    """Maps layout coordinates (y up) onto the SVG canvas (y down)."""

    def __init__(self, layout: Layout):
        xs = [p[0] for p in layout.positions.values()] or [0.0]
        ys = [p[1] for p in layout.positions.values()] or [0.0]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, max(ys) - min(ys), 1e-9)
        self.scale = (WIDTH - 2 * MARGIN) / span
        self.width = WIDTH
        self.height = round(2 * MARGIN + (max(ys) - min(ys)) * self.scale)

    def __call__(self, xy) -> tuple[float, float]:
        return (MARGIN + (xy[0] - self.x0) * self.scale, MARGIN + (self.y1 - xy[1]) * self.scale)


def _pt(xy) -> str:
    return f"{xy[0]:.3f},{xy[1]:.3f}"


def render_svg(cx: Complex, layout: Layout, trajectory: Trajectory | None = None, title: str = "") -> str:
    frame = _Frame(layout)
    pos = {v: frame(layout.positions[v]) for v in cx.vertices}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{frame.width}" '
        f'height="{frame.height}" viewBox="0 0 {frame.width} {frame.height}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")

    out.append('<g id="triangles">')
    for f in cx.faces_of_dim(2):
        points = " ".join(_pt(pos[v]) for v in sorted(f))
        out.append(
            f'<polygon data-face={quoteattr(format_face(f))} points="{points}" '
            f'fill="{TRIANGLE_FILL}" fill-opacity="{TRIANGLE_OPACITY}" stroke="none"/>'
        )
    out.append("</g>")

    out.append('<g id="edges">')
    for f in cx.faces_of_dim(1):
        a, b = sorted(f)
        out.append(
            f'<line data-face={quoteattr(format_face(f))} x1="{pos[a][0]:.3f}" y1="{pos[a][1]:.3f}" '
            f'x2="{pos[b][0]:.3f}" y2="{pos[b][1]:.3f}" stroke="{EDGE_STROKE}" stroke-width="1.5"/>'
        )
    out.append("</g>")

    out.append('<g id="vertices" font-family="sans-serif" font-size="11">')
    for v in cx.vertices:
        x, y = pos[v]
        out.append(f'<circle data-vertex={quoteattr(v)} cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{VERTEX_FILL}"/>')
        out.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}">{escape(v)}</text>')
    out.append("</g>")

    if trajectory is not None and len(trajectory):
        coords = [frame(embed(p, layout)) for p in trajectory.points]
        out.append('<g id="trajectory">')
        out.append(
            f'<polyline points="{" ".join(_pt(c) for c in coords)}" fill="none" '
            f'stroke="{PATH_STROKE}" stroke-width="2"/>'
        )
        last = len(coords) - 1
        for i, ((tick, p), c) in enumerate(zip(trajectory.samples, coords)):
            colour = "#2b8a3e" if i == 0 else "#c92a2a" if i == last else PATH_STROKE
            out.append(
                f'<circle class="sample" data-tick="{tick}" data-carrier={quoteattr(format_face(p.weights))} '
                f'cx="{c[0]:.3f}" cy="{c[1]:.3f}" r="{MARKER_RADIUS}" fill="{colour}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
