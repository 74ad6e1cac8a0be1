"""Exact-geometry audit and an exhaustive placement reference.

Everything here is deliberately independent of the semi-discrete engine:
``interiors_intersect`` works on the continuous polygons, and
``reference_blf`` re-derives the bottom-left position by brute force
over the full candidate set instead of the incremental shifting loop.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import Polygon

_EPS_REL = 1e-12


def _shift(poly: Polygon, dx: float, dy: float) -> List[Tuple[float, float]]:
    return [(x + dx, y + dy) for x, y in poly.vertices]


def _bbox(pts) -> Tuple[float, float, float, float]:
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _proper_cross(p1, p2, p3, p4, eps) -> bool:
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    return ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    )


def _point_state(pt, pts, eps) -> int:
    """1 strictly inside, 0 on boundary (within eps), -1 outside."""
    x, y = pt
    n = len(pts)
    inside = False
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        # On-segment test.
        if (
            min(x1, x2) - eps <= x <= max(x1, x2) + eps
            and min(y1, y2) - eps <= y <= max(y1, y2) + eps
        ):
            if abs(_orient((x1, y1), (x2, y2), pt)) <= eps * max(
                1.0, abs(x2 - x1) + abs(y2 - y1)
            ):
                return 0
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return 1 if inside else -1


def _witnesses(pts, eps) -> List[Tuple[float, float]]:
    """Vertices, edge midpoints, and inward-offset midpoints.

    The inward offsets catch pairs that share their entire boundary
    (identical placement), where all plain witnesses sit on edges.
    """
    n = len(pts)
    out = list(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        mx, my = (x1 + x2) / 2.0, (y1 + y2) / 2.0
        out.append((mx, my))
        ln = math.hypot(x2 - x1, y2 - y1)
        if ln > 0:
            # Inward normal of a CCW edge points left of travel.
            nx, ny = -(y2 - y1) / ln, (x2 - x1) / ln
            d = max(eps * 100, 1e-6 * ln)
            cand = (mx + nx * d, my + ny * d)
            if _point_state(cand, pts, eps) == 1:
                out.append(cand)
    return out


def interiors_intersect(
    poly_a: Polygon,
    offset_a: Tuple[float, float],
    poly_b: Polygon,
    offset_b: Tuple[float, float],
) -> bool:
    """True if the open interiors of the two placed polygons intersect.

    Touching along edges or at points does not count.
    """
    pa = _shift(poly_a, *offset_a)
    pb = _shift(poly_b, *offset_b)
    ax0, ay0, ax1, ay1 = _bbox(pa)
    bx0, by0, bx1, by1 = _bbox(pb)
    scale = max(1.0, ax1 - ax0, ay1 - ay0, bx1 - bx0, by1 - by0,
                abs(ax1), abs(ay1), abs(bx1), abs(by1))
    eps = _EPS_REL * scale
    if ax1 <= bx0 + eps or bx1 <= ax0 + eps or ay1 <= by0 + eps or by1 <= ay0 + eps:
        return False

    na, nb = len(pa), len(pb)
    for i in range(na):
        a1, a2 = pa[i], pa[(i + 1) % na]
        for j in range(nb):
            b1, b2 = pb[j], pb[(j + 1) % nb]
            if _proper_cross(a1, a2, b1, b2, eps * scale):
                return True

    for w in _witnesses(pa, eps):
        if _point_state(w, pb, eps) == 1 and _point_state(w, pa, eps) >= 0:
            return True
    for w in _witnesses(pb, eps):
        if _point_state(w, pa, eps) == 1 and _point_state(w, pb, eps) >= 0:
            return True
    return False


@dataclass
class Violation:
    kind: str  # "overlap" or "boundary"
    first: str
    second: Optional[str]
    detail: str


@dataclass
class AuditReport:
    dataset: str
    piece_count: int
    pairs_checked: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps(
            {
                "dataset": self.dataset,
                "piece_count": self.piece_count,
                "pairs_checked": self.pairs_checked,
                "ok": self.ok,
                "violations": [
                    {
                        "kind": v.kind,
                        "first": v.first,
                        "second": v.second,
                        "detail": v.detail,
                    }
                    for v in self.violations
                ],
            },
            indent=1,
        )


def verify_layout(
    placements: Sequence[Tuple[str, Polygon, float, float]],
    strip_width: float,
    dataset: str = "",
) -> AuditReport:
    """All-pairs exact overlap audit plus strip boundary checks.

    ``placements`` holds (label, polygon, dx, dy) per placed copy.
    """
    report = AuditReport(dataset=dataset, piece_count=len(placements), pairs_checked=0)
    eps = 1e-9 * max(1.0, strip_width)
    boxes = []
    for idx, (label, poly, dx, dy) in enumerate(placements):
        x0, y0, x1, y1 = _bbox(_shift(poly, dx, dy))
        boxes.append((x0, y0, x1, y1))
        if x0 < -eps or y0 < -eps or y1 > strip_width + eps:
            report.violations.append(
                Violation(
                    kind="boundary",
                    first=f"{label}#{idx}",
                    second=None,
                    detail=f"bbox ({x0:g},{y0:g})-({x1:g},{y1:g}) leaves the strip",
                )
            )
    n = len(placements)
    for i in range(n):
        xi0, yi0, xi1, yi1 = boxes[i]
        for j in range(i + 1, n):
            xj0, yj0, xj1, yj1 = boxes[j]
            if xi1 <= xj0 + eps or xj1 <= xi0 + eps or yi1 <= yj0 + eps or yj1 <= yi0 + eps:
                continue
            report.pairs_checked += 1
            la, pa, dxa, dya = placements[i]
            lb, pb, dxb, dyb = placements[j]
            if interiors_intersect(pa, (dxa, dya), pb, (dxb, dyb)):
                report.violations.append(
                    Violation(
                        kind="overlap",
                        first=f"{la}#{i}",
                        second=f"{lb}#{j}",
                        detail=f"interiors intersect at offsets ({dxa:g},{dya:g}) / ({dxb:g},{dyb:g})",
                    )
                )
    return report


# ---------------------------------------------------------------------------
# Brute-force bottom-left-fill reference.


def _ref_conflict(b, t, lab, bs, ts, ls, eps) -> bool:
    """Forbidden overlap between a piece tuple (already shifted) and a
    filled tuple, written directly from interval arithmetic rather than
    the scanning kernel.

    Tuples are side-occupancy claims, so the only forbidden case is a
    positive-length intersection between claims that share a side of the
    line; an R against an L is compatible, and endpoint or zero-length
    contact never blocks."""
    comp = (lab == 1 and ls == 2) or (lab == 2 and ls == 1)
    lo = max(b, bs)
    hi = min(t, ts)
    return hi - lo > eps and not comp


def reference_blf(
    strip_columns: Sequence[Sequence[Tuple[float, float, int]]],
    piece_columns: Sequence[Sequence[Tuple[float, float, int]]],
    y_max: float,
    eps: Optional[float] = None,
) -> Tuple[int, float]:
    """Exhaustive bottom-left search over the full candidate set.

    Candidate y values at each m are 0 and every filled tuple top minus
    every piece tuple bottom; candidates are tested in ascending order
    for global feasibility.  Used as the oracle for place_piece.
    """
    if eps is None:
        eps = 1e-9 * max(1.0, y_max)
    npc = len(piece_columns)
    ncols = len(strip_columns)

    def feasible(m: int, y: float) -> bool:
        for i in range(npc):
            k = m + i
            filled = strip_columns[k] if k < ncols else ()
            for b, t, lab in piece_columns[i]:
                if t + y > y_max + eps:
                    return False
                if b + y < -eps:
                    return False
                for bs, ts, ls in filled:
                    if _ref_conflict(b + y, t + y, lab, bs, ts, ls, eps):
                        return False
        return True

    m = 0
    while True:
        cands = {0.0}
        for i in range(npc):
            k = m + i
            if k >= ncols:
                continue
            for b, t, lab in piece_columns[i]:
                for bs, ts, ls in strip_columns[k]:
                    c = ts - b
                    if c > -eps:
                        cands.add(max(c, 0.0))
        for y in sorted(cands):
            if feasible(m, y):
                return m, y
        m += 1
        if m > ncols + 1:
            # Beyond the filled region everything is empty; y = 0 fits.
            return m, 0.0
