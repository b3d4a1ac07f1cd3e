"""Minimal SVG writers for wave fronts, partial cuts and caustics."""

from __future__ import annotations

from typing import Iterable


def _bounds(point_sets: Iterable[Iterable[tuple]]):
    xs, ys = [], []
    for pts in point_sets:
        for p in pts:
            xs.append(float(p[0]))
            ys.append(float(p[1]))
    if not xs:
        raise ValueError("nothing to draw")
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    return min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad


def _header(x0, y0, x1, y1, size=640):
    w, h = x1 - x0, y1 - y0
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
            f'height="{size * h / w:.0f}" viewBox="{x0} {-y1} {w} {h}">\n'
            '<g transform="scale(1,-1)">\n')


_FOOTER = "</g>\n</svg>\n"


def _poly(points, stroke, fill="none", width=0.01, closed=True):
    tag = "polygon" if closed else "polyline"
    coords = " ".join(f"{float(x):.6g},{float(y):.6g}" for x, y in points)
    return (f'<{tag} points="{coords}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}" vector-effect="non-scaling-stroke"/>\n')


def wavefront_svg(hat_vertices, front_vertices, domain_vertices=None) -> str:
    sets = [hat_vertices, front_vertices]
    if domain_vertices:
        sets.append(domain_vertices)
    x0, y0, x1, y1 = _bounds(sets)
    scale = max(x1 - x0, y1 - y0)
    out = [_header(x0, y0, x1, y1)]
    out.append(_poly(hat_vertices, "#888888", width=0.004 * scale))
    if domain_vertices:
        out.append(_poly(domain_vertices, "#cc2222", width=0.004 * scale))
    if len(front_vertices) >= 3:
        out.append(_poly(front_vertices, "#2244cc", fill="#2244cc22", width=0.006 * scale))
    elif len(front_vertices) == 2:
        out.append(_poly(front_vertices, "#2244cc", width=0.008 * scale, closed=False))
    out.append(_FOOTER)
    return "".join(out)


def caustic_svg(graph, hat_vertices=None) -> str:
    segs = [(e.start, e.end, e.weight) for e in graph.edges]
    sets = [[s, t] for s, t, _ in segs]
    if hat_vertices:
        sets.append(list(hat_vertices))
    x0, y0, x1, y1 = _bounds(sets)
    scale = max(x1 - x0, y1 - y0)
    out = [_header(x0, y0, x1, y1)]
    if hat_vertices:
        out.append(_poly(hat_vertices, "#888888", width=0.004 * scale))
    for start, end, weight in segs:
        out.append(_poly([start, end], "#117733", width=0.004 * scale * weight,
                         closed=False))
    out.append(_FOOTER)
    return "".join(out)
