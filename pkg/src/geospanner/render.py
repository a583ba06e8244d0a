"""Static SVG rendering of instances, spanners, and fault sets.

Spanner edges are drawn as geodesic polylines (anchor chains), not straight
chords, so the picture reflects the metric the spanner was built for.
"""
from __future__ import annotations

from .geodesic import geodesic_distance
from .instances import Instance


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(instance: Instance, graph=None, faults=(), width: float = 800.0) -> str:
    coords = instance.domain.outer.coords
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = max(float(hi[0] - lo[0]), float(hi[1] - lo[1]), 1e-9)
    margin = 0.05 * span
    scale = width / (span + 2 * margin)

    def xy(p):
        # SVG y axis points down.
        return ((p[0] - lo[0] + margin) * scale,
                (hi[1] - p[1] + margin) * scale)

    height = (float(hi[1] - lo[1]) + 2 * margin) * scale
    faults = set(faults)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        "<defs><pattern id='hatch' width='6' height='6' patternUnits='userSpaceOnUse' "
        "patternTransform='rotate(45)'><line x1='0' y1='0' x2='0' y2='6' "
        "stroke='#777' stroke-width='1.5'/></pattern></defs>",
    ]

    def polygon_points(poly):
        return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(xy, poly.vertices))

    parts.append(f'<polygon points="{polygon_points(instance.domain.outer)}" '
                 'fill="#f7f6f1" stroke="#222" stroke-width="1.5"/>')
    for hole in instance.domain.holes:
        parts.append(f'<polygon points="{polygon_points(hole)}" '
                     'fill="url(#hatch)" stroke="#555" stroke-width="1"/>')

    if graph is not None:
        for u, v, _length in graph.sorted_edges():
            path = geodesic_distance(instance.domain, instance.points[u].pos,
                                     instance.points[v].pos)
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(xy, path.anchors))
            parts.append(f'<polyline points="{pts}" fill="none" '
                         'stroke="steelblue" stroke-width="1" stroke-opacity="0.6"/>')

    max_w = max((wp.weight for wp in instance.points), default=0.0)
    for wp in sorted(instance.points, key=lambda w: w.id):
        cx, cy = xy(wp.pos)
        r = 3.0 + (5.0 * wp.weight / max_w if max_w > 0 else 0.0)
        color = "#999" if wp.id in faults else "crimson"
        parts.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
                     f'fill="{color}" fill-opacity="0.85"/>')
        parts.append(f'<text x="{_fmt(cx + r + 2)}" y="{_fmt(cy - 2)}" '
                     f'font-size="10" fill="#333">{wp.id}</text>')
        if wp.id in faults:
            d = r + 3
            parts.append(f'<line x1="{_fmt(cx - d)}" y1="{_fmt(cy - d)}" '
                         f'x2="{_fmt(cx + d)}" y2="{_fmt(cy + d)}" '
                         'stroke="red" stroke-width="2"/>')
            parts.append(f'<line x1="{_fmt(cx - d)}" y1="{_fmt(cy + d)}" '
                         f'x2="{_fmt(cx + d)}" y2="{_fmt(cy - d)}" '
                         'stroke="red" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts)
