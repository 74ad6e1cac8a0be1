"""Semi-discrete polygon representation.

A polygon of width W is represented on vertical resolution lines
x = 0, R, 2R, ... as columns of labeled y-intervals ("tuples"):

* ``M`` - solid material spanning the interval,
* ``R`` - boundary interval with material to the right of the line,
* ``L`` - boundary interval with material to the left of the line.

The pipeline is: sweep-line discretization, extension of convex vertices
that fall strictly between lines (so no material is lost), optional gap
closure, and a final join pass that merges touching same-label tuples.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

from .geometry import (
    CONVEX,
    REL_EPS,
    Polygon,
    direction_in_interior,
    vertex_kind,
)

LABEL_M = 0
LABEL_R = 1
LABEL_L = 2
LABEL_CHARS = "MRL"

GAP_ZERO_ONLY = "zero"
GAP_ALL_INTERIOR = "all"


class InternalOrderViolation(RuntimeError):
    """The column construction produced an inconsistent interval set."""


@dataclass
class IntervalTuple:
    """One labeled y-interval on a resolution line.

    ``gen`` records the indices of the polygon edges that generated the
    endpoints; gap closure uses it to decide which neighbor tuples belong
    to the same boundary feature.
    """

    b: float
    t: float
    label: int
    gen: FrozenSet[int] = field(default_factory=frozenset)

    def as_triplet(self) -> Tuple[float, float, int]:
        return (self.b, self.t, self.label)


@dataclass
class SemiDiscretePiece:
    resolution: float
    columns: List[List[IntervalTuple]]
    width: float
    height: float

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    def max_tuple_length(self) -> float:
        best = 0.0
        for col in self.columns:
            for tup in col:
                best = max(best, tup.t - tup.b)
        return best


def _eps_x(polygon: Polygon) -> float:
    return REL_EPS * max(1.0, polygon.width)

def _eps_y(polygon: Polygon) -> float:
    return REL_EPS * max(1.0, polygon.width, polygon.height)


def build_events(polygon: Polygon) -> List[float]:
    """Sorted unique vertex x-coordinates (clustered within tolerance)."""
    eps = _eps_x(polygon)
    xs = sorted(x for x, _ in polygon.vertices)
    events: List[float] = []
    for x in xs:
        if not events or x - events[-1] > eps:
            events.append(x)
    return events


class SweepState:
    """Active non-vertical edges of the sweep, updated at each event.

    The update is uniform over the event cases: at event x every edge
    incident to a vertex at x either starts (other endpoint to the right)
    or ends (other endpoint to the left); vertical edges never enter.
    """

    def __init__(self, polygon: Polygon):
        self.polygon = polygon
        self.eps = _eps_x(polygon)
        self.active: Set[int] = set()
        v = polygon.vertices
        n = len(v)
        self._edges = [(v[i], v[(i + 1) % n]) for i in range(n)]

    def edge_is_vertical(self, e: int) -> bool:
        (x1, _), (x2, _) = self._edges[e]
        return abs(x2 - x1) <= self.eps

    def y_at(self, e: int, x: float) -> float:
        (x1, y1), (x2, y2) = self._edges[e]
        if abs(x2 - x1) <= self.eps:
            raise InternalOrderViolation(f"y query on vertical edge {e}")
        t = (x - x1) / (x2 - x1)
        return y1 + t * (y2 - y1)

    def advance(self, x_event: float) -> None:
        eps = self.eps
        v = self.polygon.vertices
        n = len(v)
        for i, (vx, _) in enumerate(v):
            if abs(vx - x_event) > eps:
                continue
            for e in ((i - 1) % n, i):  # incoming and outgoing edge
                if self.edge_is_vertical(e):
                    continue
                (x1, _), (x2, _) = self._edges[e]
                ox = x2 if e == i else x1  # the endpoint away from vertex i
                if ox > x_event + eps:
                    self.active.add(e)
                elif ox < x_event - eps:
                    self.active.discard(e)
        if len(self.active) % 2 != 0:
            raise InternalOrderViolation(
                f"odd active edge count {len(self.active)} after event {x_event}"
            )


def _column_between_events(state: SweepState, x: float) -> List[IntervalTuple]:
    ys = sorted((state.y_at(e, x), e) for e in state.active)
    if len(ys) % 2 != 0:
        raise InternalOrderViolation(f"odd intersection count at x={x}")
    col = []
    for k in range(0, len(ys), 2):
        (b, eb), (t, et) = ys[k], ys[k + 1]
        col.append(IntervalTuple(b, t, LABEL_M, frozenset((eb, et))))
    return col


def _column_at_event(polygon: Polygon, x: float) -> List[IntervalTuple]:
    """Column construction when a resolution line coincides with an event."""
    eps = _eps_x(polygon)
    epsy = _eps_y(polygon)
    v = polygon.vertices
    n = len(v)
    edges = [(v[i], v[(i + 1) % n]) for i in range(n)]

    occurrences: List[Tuple[float, FrozenSet[int]]] = []
    vertical_spans: List[Tuple[float, float, int, int]] = []  # ylo, yhi, label, edge
    apexes: List[Tuple[float, int, FrozenSet[int]]] = []  # y, label, gen

    def is_vert(e: int) -> bool:
        return abs(edges[e][1][0] - edges[e][0][0]) <= eps

    # Edges strictly spanning the line contribute one crossing each.
    for e, ((x1, y1), (x2, y2)) in enumerate(edges):
        if is_vert(e):
            continue
        if min(x1, x2) < x - eps and max(x1, x2) > x + eps:
            t = (x - x1) / (x2 - x1)
            occurrences.append((y1 + t * (y2 - y1), frozenset((e,))))

    # Vertical edges lying on the line: a boundary span labeled by the
    # side of the interior; each endpoint contributes twice when the
    # piece continues past it on the line, once otherwise.
    on_vertical_vertex: Set[int] = set()
    for e, ((x1, y1), (x2, y2)) in enumerate(edges):
        if not is_vert(e) or abs(x1 - x) > eps:
            continue
        label = LABEL_L if y2 > y1 else LABEL_R  # CCW: interior left of travel
        vertical_spans.append((min(y1, y2), max(y1, y2), label, e))
        i_from, i_to = e, (e + 1) % n
        on_vertical_vertex.update((i_from, i_to))
        for vi in (i_from, i_to):
            vy = v[vi][1]
            away = (0.0, 1.0) if abs(vy - max(y1, y2)) <= epsy else (0.0, -1.0)
            count = 2 if direction_in_interior(polygon, vi, away) else 1
            other = (vi - 1) % n if vi == i_to else vi
            gen = frozenset((e, other))
            for _ in range(count):
                occurrences.append((vy, gen))

    # Remaining vertices on the line (both adjacent edges non-vertical).
    for i, (vx, vy) in enumerate(v):
        if abs(vx - x) > eps or i in on_vertical_vertex:
            continue
        e_prev, e_next = (i - 1) % n, i
        sp = 1 if edges[e_prev][0][0] > x else -1
        sn = 1 if edges[e_next][1][0] > x else -1
        gen = frozenset((e_prev, e_next))
        if sp != sn:
            occurrences.append((vy, gen))
        else:
            occurrences.append((vy, gen))
            occurrences.append((vy, gen))
            if vertex_kind(polygon, i) == CONVEX:
                apexes.append((vy, LABEL_R if sp > 0 else LABEL_L, gen))

    occurrences.sort(key=lambda o: o[0])
    if len(occurrences) % 2 != 0:
        raise InternalOrderViolation(
            f"odd boundary point count at event column x={x}"
        )

    col: List[IntervalTuple] = []
    for k in range(0, len(occurrences), 2):
        (b, gb), (t, gt) = occurrences[k], occurrences[k + 1]
        label = LABEL_M
        gen = gb | gt
        for ylo, yhi, vlabel, e in vertical_spans:
            if abs(b - ylo) <= epsy and abs(t - yhi) <= epsy:
                label = vlabel
                gen = gen | {e}
                break
        else:
            if t - b <= epsy:
                for ay, alabel, agen in apexes:
                    if abs(b - ay) <= epsy:
                        label = alabel
                        gen = gen | agen
                        break
        col.append(IntervalTuple(b, t, label, gen))
    return col


def num_lines(width: float, resolution: float, eps: float) -> int:
    """Number of resolution lines covering [0, width]."""
    return int(math.floor((width + eps) / resolution)) + 1


def discretize(polygon: Polygon, resolution: float) -> List[List[IntervalTuple]]:
    """Sweep-line pass: one column of tuples per resolution line."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    eps = _eps_x(polygon)
    events = build_events(polygon)
    state = SweepState(polygon)
    columns: List[List[IntervalTuple]] = []
    ei = 0
    for i in range(num_lines(polygon.width, resolution, eps)):
        x = i * resolution
        while ei < len(events) and events[ei] < x - eps:
            state.advance(events[ei])
            ei += 1
        if ei < len(events) and abs(events[ei] - x) <= eps:
            columns.append(_column_at_event(polygon, events[ei]))
            state.advance(events[ei])
            ei += 1
        else:
            columns.append(_column_between_events(state, x))
    return columns


# Side-coverage bitmasks: which sides of the line carry material.
_MASK_OF_LABEL = (3, 1, 2)  # M covers both sides, R the right, L the left
_LABEL_OF_MASK = {3: LABEL_M, 1: LABEL_R, 2: LABEL_L}


def _resolve_column(col: List[IntervalTuple], epsy: float) -> List[IntervalTuple]:
    """Normalize a column of possibly overlapping claims.

    The sweep and the extension step both claim material on one or both
    sides of the line over y-ranges.  A range claimed on both sides
    becomes M (claims from distinct boundary features can coincide with
    opposite labels); a range claimed on one side keeps its boundary
    label.  A zero-length claim survives only when no adjacent positive
    range already covers its sides.
    """
    if not col:
        return []
    # Cluster endpoints into canonical breakpoints.
    raw = sorted({v for tup in col for v in (tup.b, tup.t)})
    pts: List[float] = []
    for v in raw:
        if not pts or v - pts[-1] > epsy:
            pts.append(v)

    def idx(v: float) -> int:
        j = bisect.bisect_left(pts, v)
        if j == len(pts) or (j > 0 and v - pts[j - 1] < pts[j] - v):
            j -= 1
        return j

    npts = len(pts)
    seg_mask = [0] * (npts - 1)
    seg_gen: List[Set[int]] = [set() for _ in range(npts - 1)]
    pt_mask = [0] * npts
    pt_gen: List[Set[int]] = [set() for _ in range(npts)]
    for tup in col:
        m = _MASK_OF_LABEL[tup.label]
        jb, jt = idx(tup.b), idx(tup.t)
        for j in range(jb, jt):
            seg_mask[j] |= m
            seg_gen[j] |= tup.gen
        for j in range(jb, jt + 1):
            pt_mask[j] |= m
            pt_gen[j] |= tup.gen

    out: List[IntervalTuple] = []
    for j in range(npts):
        pm = pt_mask[j]
        left = seg_mask[j - 1] if j > 0 else 0
        right = seg_mask[j] if j < npts - 1 else 0
        if pm and not (left | pm == left or right | pm == right):
            out.append(
                IntervalTuple(pts[j], pts[j], _LABEL_OF_MASK[pm], frozenset(pt_gen[j]))
            )
        if j < npts - 1 and seg_mask[j]:
            label = _LABEL_OF_MASK[seg_mask[j]]
            prev = out[-1] if out else None
            if (
                prev is not None
                and prev.label == label
                and prev.t - prev.b > epsy
                and abs(prev.t - pts[j]) <= epsy
            ):
                prev.t = pts[j + 1]
                prev.gen = prev.gen | frozenset(seg_gen[j])
            else:
                out.append(
                    IntervalTuple(
                        pts[j], pts[j + 1], label, frozenset(seg_gen[j])
                    )
                )
    return out


def project_slab_edges(
    polygon: Polygon,
    resolution: float,
    columns: List[List[IntervalTuple]],
) -> None:
    """Claim each edge's slab-by-slab y-extent on the bounding lines.

    For every polygon edge and every slab (the open band between the
    lines x = iR and x = (i+1)R) it passes through, the y-span of the
    clipped edge piece is claimed on the left line with label R and on
    the right line with label L; a vertical edge strictly inside a slab
    claims its span on both lines the same way.  Together with the sweep
    slices this makes each column carry the full y-projection of the
    piece's material in both adjacent slabs: a horizontal segment through
    any interior point ends on a bounding edge or reaches a line, so its
    height is always claimed.  Two pieces overlapping strictly inside a
    slab therefore always produce same-side claims that collide on a
    line, which is what makes the interval checks sound.
    """
    eps = _eps_x(polygon)
    v = polygon.vertices
    n = len(v)

    def ensure_column(i: int) -> List[IntervalTuple]:
        while len(columns) <= i:
            columns.append([])
        return columns[i]

    for e in range(n):
        (x1, y1), (x2, y2) = v[e], v[(e + 1) % n]
        if x1 > x2:
            x1, y1, x2, y2 = x2, y2, x1, y1
        gen = frozenset((e,))
        if x2 - x1 <= eps:
            # Vertical (or numerically vertical) edge: when it sits on a
            # line the event column already labels it; strictly inside a
            # slab it bounds material claimed on both lines.
            li = int(math.floor(x1 / resolution + REL_EPS))
            xl, xr = li * resolution, (li + 1) * resolution
            if x1 - xl <= eps or xr - x1 <= eps:
                continue
            lo, hi = min(y1, y2), max(y1, y2)
            ensure_column(li).append(IntervalTuple(lo, hi, LABEL_R, gen))
            ensure_column(li + 1).append(IntervalTuple(lo, hi, LABEL_L, gen))
            continue
        first = int(math.floor((x1 + eps) / resolution))
        last = int(math.ceil((x2 - eps) / resolution))
        for li in range(first, last):
            xl, xr = li * resolution, (li + 1) * resolution
            cl, cr = max(x1, xl), min(x2, xr)
            if cr - cl <= eps:
                continue
            ya = y1 + (y2 - y1) * (cl - x1) / (x2 - x1)
            yb = y1 + (y2 - y1) * (cr - x1) / (x2 - x1)
            lo, hi = (ya, yb) if ya <= yb else (yb, ya)
            ensure_column(li).append(IntervalTuple(lo, hi, LABEL_R, gen))
            ensure_column(li + 1).append(IntervalTuple(lo, hi, LABEL_L, gen))

    for col in columns:
        col.sort(key=lambda tup: (tup.b, tup.t))


def _slab_edge_components(
    polygon: Polygon, xl: float, xr: float, eps: float
) -> List[int]:
    """Union-find roots linking edges whose shared vertex lies strictly
    inside the open slab (xl, xr).

    Two tuples on the slab's bounding lines belong to the same boundary
    feature when the boundary chain connects their generating edges
    without leaving the slab; intermediate vertices inside the slab link
    consecutive edges.
    """
    n = len(polygon.vertices)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, (vx, _) in enumerate(polygon.vertices):
        if xl + eps < vx < xr - eps:
            ra, rb = find((i - 1) % n), find(i)
            if ra != rb:
                parent[ra] = rb
    return [find(e) for e in range(n)]


def close_gaps(
    polygon: Polygon,
    resolution: float,
    columns: List[List[IntervalTuple]],
    epsy: float,
    scope: str = GAP_ALL_INTERIOR,
) -> None:
    """Extend columns so boundary features stay connected across columns.

    A tuple qualifies for closure against a neighbor-column tuple when
    their generating polygon edges are linked by a boundary chain inside
    the slab between the two lines.  If no qualifying neighbor tuple
    overlaps the tuple's closed interval, the connecting material must
    cross the gap range inside that slab; the gap range is claimed on the
    slab's side of the line (R toward the right neighbor, L toward the
    left) and the column is re-resolved, so a range also claimed by
    another feature on the opposite side correctly becomes M.  Claims can
    expose further gaps, so passes repeat until none remain.
    """
    epsx = _eps_x(polygon)
    slab_roots: Dict[int, List[int]] = {}

    def roots_for_slab(left: int) -> List[int]:
        if left not in slab_roots:
            slab_roots[left] = _slab_edge_components(
                polygon, left * resolution, (left + 1) * resolution, epsx
            )
        return slab_roots[left]

    for _ in range(len(columns) + 1):
        claims: Dict[int, List[IntervalTuple]] = {}
        for ci, col in enumerate(columns):
            for tup in col:
                if scope == GAP_ZERO_ONLY and tup.t - tup.b > epsy:
                    continue
                for nc, label in ((ci - 1, LABEL_L), (ci + 1, LABEL_R)):
                    if nc < 0 or nc >= len(columns):
                        continue
                    roots = roots_for_slab(min(ci, nc))
                    own = {roots[e] for e in tup.gen}
                    qual = [
                        q
                        for q in columns[nc]
                        if any(roots[e] in own for e in q.gen)
                    ]
                    if not qual:
                        continue
                    if any(
                        q.b - epsy <= tup.t and q.t + epsy >= tup.b for q in qual
                    ):
                        continue
                    nearest = min(
                        qual,
                        key=lambda q: q.b - tup.t if q.b > tup.t else tup.b - q.t,
                    )
                    if nearest.b > tup.t:
                        claim = IntervalTuple(tup.t, nearest.b, label, tup.gen)
                    else:
                        claim = IntervalTuple(nearest.t, tup.b, label, tup.gen)
                    claims.setdefault(ci, []).append(claim)
        if not claims:
            break
        for ci, extra in claims.items():
            columns[ci] = _resolve_column(columns[ci] + extra, epsy)


def join_tuples(columns: List[List[IntervalTuple]], epsy: float) -> None:
    """Merge same-label tuples that touch or overlap within each column."""
    for ci, col in enumerate(columns):
        col.sort(key=lambda tup: (tup.b, tup.t))
        merged: List[IntervalTuple] = []
        for tup in col:
            if merged:
                prev = merged[-1]
                if tup.label == prev.label and tup.b <= prev.t + epsy:
                    prev.t = max(prev.t, tup.t)
                    prev.gen = prev.gen | tup.gen
                    continue
                if tup.b < prev.t - epsy:
                    raise InternalOrderViolation(
                        f"overlapping tuples with different labels in column {ci}: "
                        f"{prev.as_triplet()} vs {tup.as_triplet()}"
                    )
            merged.append(tup)
        col[:] = merged


def semidiscretize(
    polygon: Polygon,
    resolution: float,
    gap_scope: str = GAP_ALL_INTERIOR,
) -> SemiDiscretePiece:
    """Full pipeline: discretize, project edges, close gaps, join."""
    columns = discretize(polygon, resolution)
    project_slab_edges(polygon, resolution, columns)
    epsy = _eps_y(polygon)
    columns = [_resolve_column(col, epsy) for col in columns]
    close_gaps(polygon, resolution, columns, epsy, gap_scope)
    join_tuples(columns, epsy)
    return SemiDiscretePiece(
        resolution=resolution,
        columns=columns,
        width=polygon.width,
        height=polygon.height,
    )


def dump(sd: SemiDiscretePiece) -> str:
    """Debug rendering, one line per column: ``i: (b,t,LABEL) ...``."""
    lines = []
    for i, col in enumerate(sd.columns):
        parts = " ".join(
            f"({tup.b:g},{tup.t:g},{LABEL_CHARS[tup.label]})" for tup in col
        )
        lines.append(f"{i}: {parts}")
    return "\n".join(lines)
