"""Bottom-left-fill placement over semi-discrete pieces.

``pack`` is deterministic: copies are placed in decreasing bounding-box
area (ties by input order), each copy at the lowest feasible y on the
leftmost feasible resolution line, with rotation candidates compared by
rightmost extent, then top extent, then angle.  Consecutive copies of
the same shape warm-start from the previous copy's final vector, which
is sound because filled area only grows.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .geometry import REL_EPS, Polygon, rotate, trig
from .semidiscrete import SemiDiscretePiece, semidiscretize, GAP_ALL_INTERIOR
from .strip import PieceArrays, StripState, flatten_piece

# Edges whose x-projection is below this fraction of their length count
# as near-vertical and trigger the fallback resolution rule.
NEAR_VERTICAL_FRACTION = 0.01


class PlacementError(RuntimeError):
    pass


class PieceTooWide(PlacementError):
    """No allowed rotation fits the piece inside the strip width."""


class AllEdgesVertical(PlacementError):
    """The resolution heuristic has no non-vertical edge to measure."""


def check_order(last_index: int) -> np.ndarray:
    """Column visiting order: both ends first, then breadth-first
    floor-midpoints of the remaining gaps."""
    if last_index < 0:
        raise ValueError("last_index must be >= 0")
    if last_index == 0:
        return np.asarray([0], dtype=np.int64)
    out = [0, last_index]
    queue = [(0, last_index)]
    while queue:
        nxt = []
        for lo, hi in queue:
            mid = (lo + hi) // 2
            if mid != lo and mid != hi:
                out.append(mid)
                nxt.append((lo, mid))
                nxt.append((mid, hi))
        queue = nxt
    return np.asarray(out, dtype=np.int64)


def base_resolution(polygons: Sequence[Polygon], angles: Sequence[float]) -> float:
    """Default resolution from edge and piece x-projections.

    Normally the minimum x-projection over all non-vertical edges in all
    allowed rotations (at least one line per edge), floored by the
    smallest piece's width divided by its edge count.  When rotation
    turns an edge (near-)vertical, or edges are near-vertical to begin
    with, the edge projection degenerates and the piece-based fallback
    is used alone.
    """
    if not polygons:
        raise ValueError("no polygons")
    scale = max(max(1.0, p.width, p.height) for p in polygons)
    eps = REL_EPS * scale

    p_e = math.inf
    fallback = False
    any_candidate = False
    for poly in polygons:
        v = poly.vertices
        n = len(v)
        for i in range(n):
            dx0 = v[(i + 1) % n][0] - v[i][0]
            dy0 = v[(i + 1) % n][1] - v[i][1]
            length = math.hypot(dx0, dy0)
            for theta in angles:
                c, s = trig(theta)
                rdx = abs(dx0 * c - dy0 * s)
                if rdx <= eps:
                    continue  # vertical in this orientation: never counted
                if rdx <= NEAR_VERTICAL_FRACTION * length:
                    fallback = True
                else:
                    any_candidate = True
                    p_e = min(p_e, rdx)
    if not any_candidate:
        raise AllEdgesVertical("every edge is vertical in every rotation")

    smallest = min(polygons, key=lambda p: p.width * p.height)
    p_p = smallest.width / len(smallest.vertices)
    if fallback:
        return p_p
    return max(p_e, p_p)


@dataclass(frozen=True)
class PlacementResult:
    m: int
    y_t: float
    checks: int
    index_checks: int
    tv_updates: int
    right_shifts: int


def place_piece(
    strip: StripState,
    piece: PieceArrays,
    order: Optional[np.ndarray] = None,
    m0: int = 0,
    y0: float = 0.0,
) -> PlacementResult:
    """Find the bottom-left position for one piece; read-only on the strip."""
    if piece.height > strip.y_max + strip.eps_y:
        raise PieceTooWide(
            f"piece height {piece.height} exceeds strip width {strip.y_max}"
        )
    if order is None:
        order = check_order(piece.num_columns - 1)
    m, y, checks, idx, tvu, rsh = _kernels.place_one(
        strip.b,
        strip.t,
        strip.label,
        strip.count,
        order,
        piece.b,
        piece.t,
        piece.label,
        piece.colptr,
        m0,
        y0,
        strip.y_max,
        strip.eps_y,
    )
    return PlacementResult(int(m), float(y), int(checks), int(idx), int(tvu), int(rsh))


@dataclass
class SolverConfig:
    resolution: Optional[float] = None  # None selects base_resolution
    rotations: Optional[Tuple[float, ...]] = None  # overrides the dataset
    dtheta: Optional[float] = None  # step for datasets with free rotation
    warm_start: bool = True
    gap_scope: str = GAP_ALL_INTERIOR


class PlacementRecord(NamedTuple):
    piece_id: str
    piece_index: int
    rotation: float
    m: int
    x_t: float
    y_t: float
    width: float
    height: float
    checks: int
    index_checks: int
    tv_updates: int
    right_shifts: int


@dataclass
class PackResult:
    dataset: str
    resolution: float
    strip_width: float
    angles_used: Tuple[float, ...]
    strip: StripState
    used_length: float
    disc_ms: float
    place_ms: float
    # Raw per-copy outputs; records are materialized on first access so
    # that pure packing runs do not pay for building Python objects.
    _batches: List[tuple] = field(default_factory=list, repr=False)
    _records: Optional[List[PlacementRecord]] = field(default=None, repr=False)

    @property
    def records(self) -> List[PlacementRecord]:
        if self._records is None:
            recs: List[PlacementRecord] = []
            res = self.resolution
            for item in self._batches:
                if item[0] == "one":
                    recs.append(item[1])
                    continue
                _, pid, pi, a, w, h, out_m, out_y, out_c = item
                for c in range(len(out_m)):
                    m = int(out_m[c])
                    recs.append(
                        PlacementRecord(
                            piece_id=pid,
                            piece_index=pi,
                            rotation=a,
                            m=m,
                            x_t=m * res,
                            y_t=float(out_y[c]),
                            width=w,
                            height=h,
                            checks=int(out_c[c, 0]),
                            index_checks=int(out_c[c, 1]),
                            tv_updates=int(out_c[c, 2]),
                            right_shifts=int(out_c[c, 3]),
                        )
                    )
            self._records = recs
        return self._records

    @property
    def total_checks(self) -> int:
        return sum(r.checks for r in self.records)

    def placed_polygons(self, dataset) -> List[Tuple[str, Polygon, float, float]]:
        """(piece_id, rotated polygon, dx, dy) per placement."""
        out = []
        for r in self.records:
            poly = rotate(dataset.pieces[r.piece_index].polygon, r.rotation)
            out.append((r.piece_id, poly, r.x_t, r.y_t))
        return out


def resolve_angles(dataset, config: SolverConfig) -> Tuple[float, ...]:
    if config.rotations is not None:
        return tuple(a % 360.0 for a in config.rotations)
    if dataset.rotations == "free":
        step = config.dtheta if config.dtheta else 90.0
        n = int(round(360.0 / step))
        return tuple((i * step) % 360.0 for i in range(n))
    return tuple(a % 360.0 for a in dataset.rotations)


class _DiscretizationCache:
    def __init__(self, resolution: float, gap_scope: str):
        self.resolution = resolution
        self.gap_scope = gap_scope
        self._cache: Dict[Tuple[int, float], Tuple[SemiDiscretePiece, PieceArrays, np.ndarray]] = {}
        self.elapsed = 0.0

    def get(self, dataset, piece_index: int, angle: float):
        key = (piece_index, angle)
        if key not in self._cache:
            t0 = time.perf_counter()
            poly = rotate(dataset.pieces[piece_index].polygon, angle)
            sd = semidiscretize(poly, self.resolution, self.gap_scope)
            arrays = flatten_piece(sd)
            order = check_order(arrays.num_columns - 1)
            self.elapsed += time.perf_counter() - t0
            self._cache[key] = (sd, arrays, order)
        return self._cache[key]


def pack(
    dataset,
    config: Optional[SolverConfig] = None,
    order: Optional[Sequence[int]] = None,
    rotation_overrides: Optional[Dict[int, float]] = None,
    disc_cache: Optional[_DiscretizationCache] = None,
) -> PackResult:
    """Place every copy of every piece; returns the full layout.

    ``order`` is a permutation of expanded copy indices (default: by
    decreasing bounding-box area); ``rotation_overrides`` pins single
    copies to one angle.  Both hooks exist for the local search, as does
    ``disc_cache``: repeated packs of one dataset at one resolution can
    share piece discretizations instead of recomputing them.
    """
    config = config or SolverConfig()
    angles = resolve_angles(dataset, config)
    y_max = dataset.strip_width

    polys = [p.polygon for p in dataset.pieces]
    resolution = config.resolution if config.resolution else base_resolution(polys, angles)

    piece_w = [p.width for p in polys]
    piece_area = [p.width * p.height for p in polys]
    quantities = [p.quantity for p in dataset.pieces]
    copies = np.repeat(np.arange(len(dataset.pieces), dtype=np.int64), quantities)
    ncopies = int(copies.shape[0])
    if order is None:
        seq = np.argsort(
            -np.asarray(piece_area, dtype=np.float64)[copies], kind="stable"
        )
    else:
        seq = np.asarray(list(order), dtype=np.int64)
        if not np.array_equal(np.sort(seq), np.arange(ncopies)):
            raise ValueError("order must be a permutation of copy indices")
    rotation_overrides = rotation_overrides or {}
    copies_seq = copies[seq]
    # End position of each run of consecutive identical shapes.
    run_ends = np.append(np.flatnonzero(np.diff(copies_seq)) + 1, ncopies)

    if (
        disc_cache is not None
        and disc_cache.resolution == resolution
        and disc_cache.gap_scope == config.gap_scope
    ):
        cache = disc_cache
    else:
        cache = _DiscretizationCache(resolution, config.gap_scope)
    disc_before = cache.elapsed
    # Area-based length estimate; commit overflow grows the arrays if a
    # layout runs longer, so a dense guess keeps the working set small.
    est_cols = (
        int(sum(piece_area[pi] for pi in copies) / (y_max * resolution) * 1.5) + 64
    )
    strip = StripState(
        y_max,
        resolution,
        cap_cols=min(max(256, est_cols), 1 << 22),
        cap_tuples=16,
    )

    batches: List[tuple] = []
    used_length = 0.0
    place_elapsed = 0.0
    eps = strip.eps_y

    warm: Dict[float, Tuple[int, float]] = {}
    prev_pi: Optional[int] = None

    pos = 0
    while pos < ncopies:
        copy_idx = int(seq[pos])
        pi = int(copies_seq[pos])
        piece = dataset.pieces[pi]
        allowed = (
            (rotation_overrides[copy_idx],)
            if copy_idx in rotation_overrides
            else angles
        )
        feasible_angles = []
        for a in sorted(set(x % 360.0 for x in allowed)):
            poly = rotate(polys[pi], a)
            if poly.height <= y_max + eps:
                feasible_angles.append(a)
        if not feasible_angles:
            raise PieceTooWide(
                f"piece {piece.id!r} does not fit the strip in any allowed rotation"
            )
        if prev_pi != pi:
            warm = {}

        # Fast path: a run of copies of one shape with one feasible angle.
        if config.warm_start and len(feasible_angles) == 1:
            if not rotation_overrides:
                end = int(run_ends[np.searchsorted(run_ends, pos, side="right")])
                run = end - pos
            else:
                run = 1
                while (
                    pos + run < ncopies
                    and int(copies_seq[pos + run]) == pi
                    and int(seq[pos + run]) not in rotation_overrides
                ):
                    run += 1
            a = feasible_angles[0]
            sd, arrays, ord_arr = cache.get(dataset, pi, a)
            m0, y0 = warm.get(a, (0, 0.0))
            t0 = time.perf_counter()
            out_m = np.empty(run, dtype=np.int64)
            out_y = np.empty(run, dtype=np.float64)
            out_c = np.empty((run, 4), dtype=np.int64)
            done = 0
            while done < run:
                strip.ensure_capacity(
                    strip.num_columns_used + 2 * arrays.num_columns + 8
                )
                n, status = _kernels.place_run(
                    strip.b, strip.t, strip.label, strip.count,
                    ord_arr,
                    arrays.b, arrays.t, arrays.label, arrays.colptr,
                    run - done,
                    m0, y0, y_max, eps,
                    out_m[done:], out_y[done:], out_c[done:],
                )
                if status == _kernels.COMMIT_INFEASIBLE:
                    from .strip import InfeasibleCommit

                    raise InfeasibleCommit(f"batch commit failed for {piece.id!r}")
                done_new = done + int(n)
                if done_new > done:
                    m0, y0 = int(out_m[done_new - 1]), float(out_y[done_new - 1])
                if status == _kernels.COMMIT_OVERFLOW:
                    cap_c, cap_t = strip.b.shape
                    strip._grow(cap_c * 2, cap_t * 2)
                done = done_new
            place_elapsed += time.perf_counter() - t0
            mx = int(out_m.max()) if run else 0
            strip.num_columns_used = max(
                strip.num_columns_used, mx + arrays.num_columns
            )
            used_length = max(used_length, mx * resolution + arrays.width)
            batches.append(
                (
                    "run",
                    piece.id,
                    pi,
                    a,
                    arrays.width,
                    arrays.height,
                    out_m,
                    out_y,
                    out_c,
                )
            )
            warm = {a: (m0, y0)}
            prev_pi = pi
            pos += run
            continue

        best = None  # (rightmost, top, angle, result, arrays)
        new_warm: Dict[float, Tuple[int, float]] = {}
        for a in feasible_angles:
            sd, arrays, ord_arr = cache.get(dataset, pi, a)
            m0, y0 = (0, 0.0)
            if config.warm_start and a in warm:
                m0, y0 = warm[a]
            t0 = time.perf_counter()
            res = place_piece(strip, arrays, ord_arr, m0, y0)
            place_elapsed += time.perf_counter() - t0
            new_warm[a] = (res.m, res.y_t)
            rightmost = res.m * resolution + arrays.width
            top = res.y_t + arrays.height
            key = (rightmost, top, a)
            if best is None or key < best[0]:
                best = (key, res, arrays, a)
        assert best is not None
        _, res, arrays, a = best
        t0 = time.perf_counter()
        strip.commit(arrays, res.m, res.y_t)
        place_elapsed += time.perf_counter() - t0
        batches.append(
            (
                "one",
                PlacementRecord(
                    piece_id=piece.id,
                    piece_index=pi,
                    rotation=a,
                    m=res.m,
                    x_t=res.m * resolution,
                    y_t=res.y_t,
                    width=arrays.width,
                    height=arrays.height,
                    checks=res.checks,
                    index_checks=res.index_checks,
                    tv_updates=res.tv_updates,
                    right_shifts=res.right_shifts,
                ),
            )
        )
        used_length = max(used_length, res.m * resolution + arrays.width)
        warm = new_warm
        prev_pi = pi
        pos += 1

    return PackResult(
        dataset=dataset.name,
        resolution=resolution,
        strip_width=y_max,
        angles_used=angles,
        strip=strip,
        used_length=used_length,
        disc_ms=(cache.elapsed - disc_before) * 1e3,
        place_ms=place_elapsed * 1e3,
        _batches=batches,
    )
