"""Layout quality metrics: wasted fraction and extension area."""
from __future__ import annotations

import math
from typing import List, Tuple

from .geometry import CONVEX, REL_EPS, Polygon, area, vertex_kind


def wasted_fraction(used_length: float, strip_width: float, pieces_area: float) -> float:
    """Percentage of the used strip rectangle not covered by pieces."""
    rect = used_length * strip_width
    if rect <= 0:
        return 0.0
    return 100.0 * (rect - pieces_area) / rect


def extension_area(polygon: Polygon, resolution: float) -> float:
    """Exact area blocked by the convex-vertex extension step.

    For each convex vertex strictly between resolution lines: an edge
    reaching a neighboring line contributes the triangle between the
    edge, that line and the horizontal through the vertex; if both edges
    reach the same line the region is the single triangle between the
    two clipped edges and the line; an edge lying wholly between the
    lines contributes the trapezoid between the edge and the line on its
    outward side.  Integer-aligned data has no such vertices and the
    result is exactly zero.
    """
    eps = REL_EPS * max(1.0, polygon.width)
    v = polygon.vertices
    n = len(v)
    total = 0.0
    seen_between_edges = set()

    for i in range(n):
        vx, vy = v[i]
        li = int(math.floor(vx / resolution + REL_EPS))
        xl, xr = li * resolution, (li + 1) * resolution
        if vx - xl <= eps or xr - vx <= eps:
            continue
        if vertex_kind(polygon, i) != CONVEX:
            continue

        adjacent = []  # (edge_index, boundary_start, boundary_end, other_pt)
        e_prev = (i - 1) % n
        adjacent.append((e_prev, v[e_prev], (vx, vy), v[e_prev]))
        adjacent.append((i, (vx, vy), v[(i + 1) % n], v[(i + 1) % n]))

        crossings = []  # (line_x, ya)
        betweens = []  # edge index
        for e, a, b, other in adjacent:
            ox, oy = other
            if ox <= xl + eps:
                ya = oy if abs(ox - xl) <= eps else vy + (oy - vy) * (xl - vx) / (ox - vx)
                crossings.append((xl, ya))
            elif ox >= xr - eps:
                ya = oy if abs(ox - xr) <= eps else vy + (oy - vy) * (xr - vx) / (ox - vx)
                crossings.append((xr, ya))
            else:
                betweens.append((e, a, b))

        if len(crossings) == 2 and abs(crossings[0][0] - crossings[1][0]) <= eps:
            # Both edges clipped by the same line: one triangle between
            # the clipped edges and that line.
            (x1, y1), (x2, y2) = crossings
            total += 0.5 * abs(
                (x1 - vx) * (y2 - vy) - (x2 - vx) * (y1 - vy)
            )
        else:
            for xline, ya in crossings:
                total += 0.5 * abs(vx - xline) * abs(ya - vy)

        for e, a, b in betweens:
            if e in seen_between_edges:
                continue
            seen_between_edges.add(e)
            # Outward side of a CCW boundary edge is to its right, whose
            # x-component has the sign of the edge's dy.
            dx, dy = b[0] - a[0], b[1] - a[1]
            xline = xr if dy > 0 else xl
            total += abs(b[1] - a[1]) * (abs(a[0] - xline) + abs(b[0] - xline)) / 2.0

    return total


def layout_extension_area(dataset, result) -> float:
    """Total extension area over all placed copies (per chosen rotation)."""
    from .geometry import rotate

    cache = {}
    total = 0.0
    for r in result.records:
        key = (r.piece_index, r.rotation)
        if key not in cache:
            poly = rotate(dataset.pieces[r.piece_index].polygon, r.rotation)
            cache[key] = extension_area(poly, result.resolution)
        total += cache[key]
    return total


def layout_pieces_area(dataset, result) -> float:
    areas = {}
    total = 0.0
    for r in result.records:
        if r.piece_index not in areas:
            areas[r.piece_index] = area(dataset.pieces[r.piece_index].polygon)
        total += areas[r.piece_index]
    return total
