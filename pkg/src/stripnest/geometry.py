"""Polygon primitives: validation, normalization, rotation and local queries.

All downstream stages (discretization, placement, audit) assume the
invariants established here: simple polygons, counter-clockwise vertex
order, no repeated or collinear consecutive vertices, and a bounding box
anchored at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

# Below this absolute area a polygon is considered degenerate.
AREA_EPS = 1e-12

# Relative tolerance for collinearity / coincident vertex tests.
REL_EPS = 1e-9

CONVEX = "convex"
REFLEX = "reflex"
STRAIGHT = "straight"


class GeometryError(ValueError):
    """Base class for polygon validation failures."""


class TooFewVertices(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class DegenerateArea(GeometryError):
    pass


Point = Tuple[float, float]


@dataclass(frozen=True)
class Polygon:
    """A simple polygon in counter-clockwise order, AABB anchored at (0, 0).

    Construct through :func:`validate_and_normalize`; the constructor does
    not re-check the invariants.
    """

    vertices: Tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> Tuple[Point, Point]:
        """Edge i runs from vertex i to vertex (i + 1) mod n."""
        v = self.vertices
        return v[i], v[(i + 1) % len(v)]

    @property
    def width(self) -> float:
        return max(x for x, _ in self.vertices)

    @property
    def height(self) -> float:
        return max(y for _, y in self.vertices)


def signed_area(vertices: Sequence[Point]) -> float:
    """Shoelace signed area; positive for counter-clockwise order."""
    total = 0.0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return 0.5 * total


def area(polygon: Polygon) -> float:
    return signed_area(polygon.vertices)


def _scale_of(vertices: Sequence[Point]) -> float:
    m = 1.0
    for x, y in vertices:
        m = max(m, abs(x), abs(y))
    return m


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _segments_properly_intersect(p1, p2, p3, p4, eps) -> bool:
    """True if open segments p1p2 and p3p4 cross or improperly overlap.

    Shared endpoints between adjacent edges are excluded by the caller.
    """
    d1 = _cross(p4[0] - p3[0], p4[1] - p3[1], p1[0] - p3[0], p1[1] - p3[1])
    d2 = _cross(p4[0] - p3[0], p4[1] - p3[1], p2[0] - p3[0], p2[1] - p3[1])
    d3 = _cross(p2[0] - p1[0], p2[1] - p1[1], p3[0] - p1[0], p3[1] - p1[1])
    d4 = _cross(p2[0] - p1[0], p2[1] - p1[1], p4[0] - p1[0], p4[1] - p1[1])
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True

    # Collinear overlap: all orientation tests near zero and the
    # projections of the segments onto their common line overlap.
    if abs(d1) <= eps and abs(d2) <= eps and abs(d3) <= eps and abs(d4) <= eps:
        for axis in (0, 1):
            lo1, hi1 = sorted((p1[axis], p2[axis]))
            lo2, hi2 = sorted((p3[axis], p4[axis]))
            if hi1 < lo2 + eps or hi2 < lo1 + eps:
                return False
        return True
    return False


def _check_simple(vertices: Sequence[Point]) -> None:
    n = len(vertices)
    scale = _scale_of(vertices)
    eps = REL_EPS * scale * scale
    for i in range(n):
        a1, a2 = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1, b2 = vertices[j], vertices[(j + 1) % n]
            if _segments_properly_intersect(a1, a2, b1, b2, eps):
                raise SelfIntersecting(
                    f"edges {i} and {j} intersect: {a1}-{a2} / {b1}-{b2}"
                )


def validate_and_normalize(raw: Iterable[Sequence[float]]) -> Polygon:
    """Validate a raw vertex list and return a normalized Polygon.

    Normalization: drop repeated and collinear consecutive vertices,
    enforce counter-clockwise order, translate so min x = min y = 0.

    Raises TooFewVertices, SelfIntersecting or DegenerateArea.
    """
    pts: List[Point] = [(float(p[0]), float(p[1])) for p in raw]
    if len(pts) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(pts)}")

    scale = _scale_of(pts)
    coincide_eps = REL_EPS * scale
    collinear_eps = REL_EPS * scale * scale

    # Remove repeated consecutive vertices (closing repeat included).
    dedup: List[Point] = []
    for p in pts:
        if dedup and abs(p[0] - dedup[-1][0]) <= coincide_eps and abs(
            p[1] - dedup[-1][1]
        ) <= coincide_eps:
            continue
        dedup.append(p)
    while len(dedup) > 1 and abs(dedup[0][0] - dedup[-1][0]) <= coincide_eps and abs(
        dedup[0][1] - dedup[-1][1]
    ) <= coincide_eps:
        dedup.pop()

    # Remove collinear interior vertices.  Iterate to a fixed point since
    # removing one vertex can make its neighbor collinear.
    changed = True
    while changed and len(dedup) >= 3:
        changed = False
        out: List[Point] = []
        n = len(dedup)
        for i in range(n):
            prev = dedup[(i - 1) % n]
            cur = dedup[i]
            nxt = dedup[(i + 1) % n]
            ax, ay = cur[0] - prev[0], cur[1] - prev[1]
            bx, by = nxt[0] - cur[0], nxt[1] - cur[1]
            if abs(_cross(ax, ay, bx, by)) <= collinear_eps:
                dot = ax * bx + ay * by
                if dot < 0:
                    # A spike folding back on itself has no interior here.
                    raise SelfIntersecting(f"spike at vertex {i}: {cur}")
                changed = True
                continue
            out.append(cur)
        dedup = out

    if len(dedup) < 3:
        raise TooFewVertices("fewer than 3 vertices remain after cleanup")

    a = signed_area(dedup)
    if abs(a) <= max(AREA_EPS, collinear_eps):
        raise DegenerateArea(f"polygon area {a} is degenerate")
    if a < 0:
        dedup.reverse()

    _check_simple(dedup)

    minx = min(x for x, _ in dedup)
    miny = min(y for _, y in dedup)
    moved = tuple((x - minx, y - miny) for x, y in dedup)
    return Polygon(vertices=moved)


def trig(theta_deg: float) -> Tuple[float, float]:
    """(cos, sin) of an angle in degrees, exact at multiples of 90."""
    t = theta_deg % 360.0
    if t == 0.0:
        return 1.0, 0.0
    if t == 90.0:
        return 0.0, 1.0
    if t == 180.0:
        return -1.0, 0.0
    if t == 270.0:
        return 0.0, -1.0
    r = math.radians(t)
    return math.cos(r), math.sin(r)


def rotate(polygon: Polygon, theta_deg: float) -> Polygon:
    """Rotate counter-clockwise by theta degrees, then re-anchor at (0, 0).

    Multiples of 90 degrees use exact trigonometric values so that
    integer coordinates stay integral.
    """
    t = theta_deg % 360.0
    if t == 0.0:
        c, s = 1.0, 0.0
    elif t == 90.0:
        c, s = 0.0, 1.0
    elif t == 180.0:
        c, s = -1.0, 0.0
    elif t == 270.0:
        c, s = 0.0, -1.0
    else:
        r = math.radians(t)
        c, s = math.cos(r), math.sin(r)
    rotated = [(c * x - s * y, s * x + c * y) for x, y in polygon.vertices]
    minx = min(x for x, _ in rotated)
    miny = min(y for _, y in rotated)
    return Polygon(vertices=tuple((x - minx, y - miny) for x, y in rotated))


def aabb(polygon: Polygon) -> Tuple[float, float, float, float]:
    """(min_x, min_y, max_x, max_y); first two are 0 after normalization."""
    xs = [x for x, _ in polygon.vertices]
    ys = [y for _, y in polygon.vertices]
    return min(xs), min(ys), max(xs), max(ys)


def vertex_kind(polygon: Polygon, i: int) -> str:
    """Classify vertex i of a CCW polygon as convex, reflex or straight."""
    v = polygon.vertices
    n = len(v)
    prev, cur, nxt = v[(i - 1) % n], v[i], v[(i + 1) % n]
    scale = _scale_of(v)
    eps = REL_EPS * scale * scale
    c = _cross(cur[0] - prev[0], cur[1] - prev[1], nxt[0] - cur[0], nxt[1] - cur[1])
    if c > eps:
        return CONVEX
    if c < -eps:
        return REFLEX
    return STRAIGHT


def direction_in_interior(polygon: Polygon, i: int, direction: Point) -> bool:
    """True if moving from vertex i along `direction` enters the interior.

    Directions tangent to an edge count as outside (strict test).
    """
    v = polygon.vertices
    n = len(v)
    prev, cur, nxt = v[(i - 1) % n], v[i], v[(i + 1) % n]
    ax, ay = cur[0] - prev[0], cur[1] - prev[1]
    bx, by = nxt[0] - cur[0], nxt[1] - cur[1]
    wx, wy = direction
    scale = _scale_of(v)
    eps = REL_EPS * scale * math.hypot(wx, wy)
    ca = _cross(ax, ay, wx, wy)
    cb = _cross(bx, by, wx, wy)
    turn = _cross(ax, ay, bx, by)
    if turn > 0:  # convex: interior cone is the intersection of half planes
        return ca > eps and cb > eps
    if turn < 0:  # reflex: union of half planes
        return ca > eps or cb > eps
    return ca > eps


@dataclass(frozen=True)
class Piece:
    """A demand item: polygon, multiplicity and permitted rotations."""

    id: str
    polygon: Polygon
    quantity: int
    rotations: Tuple[float, ...] | str = (0.0,)  # tuple of degrees or "free"
