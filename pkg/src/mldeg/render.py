"""SVG drawings of planar line arrangements and DOT Hasse diagrams."""
from __future__ import annotations

import itertools
from fractions import Fraction

from .arrangement import arrangement_from_scaling, bounded_regions, regions
from .exact import as_matrix
from .lp import cone_is_trivial


def _intersections(lines):
    pts = []
    for (c1, a1), (c2, a2) in itertools.combinations(lines, 2):
        den = a1[0] * a2[1] - a1[1] * a2[0]
        if den == 0:
            continue
        x = (-c1 * a2[1] + c2 * a1[1]) / den
        y = (-a1[0] * c2 + a2[0] * c1) / den
        pts.append((x, y))
    return pts


def _clip(c, a, box):
    """End points of the line c + a.x = 0 inside the box, or None."""
    x0, x1, y0, y1 = box
    cand = []
    if a[1] != 0:
        for x in (x0, x1):
            y = -(c + a[0] * x) / a[1]
            if y0 <= y <= y1:
                cand.append((x, y))
    if a[0] != 0:
        for y in (y0, y1):
            x = -(c + a[1] * y) / a[0]
            if x0 <= x <= x1:
                cand.append((x, y))
    cand = sorted(set(cand))
    return (cand[0], cand[-1]) if len(cand) >= 2 else None


def arrangement_svg(w, size: int = 480) -> str:
    """Lines of a 3 x n real scaling on the chart x_0 = 1, bounded regions dotted."""
    w = as_matrix(w)
    if w.rows != 3:
        raise ValueError("only planar arrangements (3-row scalings) can be drawn")
    arr = arrangement_from_scaling(w)
    lines = [k for k, _ in arr.deduplicated()]
    pts = _intersections(lines) or [(Fraction(0), Fraction(0))]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1)) / 4
    box = (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)
    sx = size / float(box[1] - box[0])
    sy = size / float(box[3] - box[2])

    def px(p):
        return (float(p[0] - box[0]) * sx, size - float(p[1] - box[2]) * sy)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">', f'<rect width="{size}" height="{size}" fill="white"/>']
    for (c, a), (_, labs) in zip(lines, arr.deduplicated()):
        seg = _clip(c, a, box)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = px(seg[0]), px(seg[1])
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="black" stroke-width="1.5"><title>{"/".join(map(str, labs))}</title></line>')
    n_b = bounded_regions(arr)
    for signs, q in regions(arr) if n_b else ():
        G = [[s * x for x in a] for s, (_, a) in zip(signs, lines)]
        if cone_is_trivial(G):
            x, y = px(q)
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f77b4"/>')
    out.append(f'<text x="8" y="18" font-family="sans-serif" font-size="14">'
               f'{n_b} bounded regions</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def hasse_dot(labels, edges, name: str = "weak_order") -> str:
    """DOT source of a Hasse diagram; edges go from smaller to larger."""
    out = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, lab in enumerate(labels):
        out.append(f'  n{i} [label="{lab}"];')
    for a, b in edges:
        out.append(f"  n{a} -> n{b};")
    out.append("}")
    return "\n".join(out) + "\n"
