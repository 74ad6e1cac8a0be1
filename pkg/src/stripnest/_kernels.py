"""Hot placement kernels over flattened interval arrays.

The strip is held in fixed-capacity 2D arrays (one row per resolution
line, one slot per tuple); pieces arrive as flattened 1D arrays with a
column pointer.  All functions here are written once in plain Python and
compiled with numba unless the environment variable
``STRIPNEST_BACKEND=python`` selects the interpreted fallback.

Labels are encoded M=0, R=1, L=2.  Each tuple is a side-occupancy
claim: R means the piece has material at these heights somewhere to the
right of the line (within the adjacent slab), L to the left, M on both
sides.  The semi-discretization guarantees these claims cover the full
y-projection of the piece's material in each slab, so two pieces whose
interiors overlap always produce two claims that overlap over a
positive length while sharing a side.  The conflict test is therefore
exact: a positive-length intersection between claims that share a side
(anything except an R against an L) blocks; complementary overlaps and
mere endpoint or zero-length contact never do.

When a piece is committed, a range claimed R by one piece and L by
another holds material on both sides of the line, so the merged strip
column carries M there; partial overlaps split the tuples accordingly.
"""
from __future__ import annotations

import os

import numpy as np

_BACKEND = os.environ.get("STRIPNEST_BACKEND", "numba").strip().lower()
if _BACKEND not in ("numba", "python"):
    raise ValueError(f"STRIPNEST_BACKEND must be 'numba' or 'python', got {_BACKEND!r}")

USE_NUMBA = _BACKEND == "numba"
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "python"

FITS = 0
SHIFTED = 1
IMPOSSIBLE = 2

COMMIT_OK = 0
COMMIT_OVERFLOW = 1
COMMIT_INFEASIBLE = 2


def _fit_column(sb2, st2, slab2, k, cnt, b, t, lab, y, ymax, epsy):
    """Slide one piece tuple upward along one strip column.

    Returns (code, y_new, checks, index_checks).  code is FITS when the
    tuple is clear at the entry y, SHIFTED when a larger feasible y was
    found, IMPOSSIBLE when every shift pushes the tuple past ymax.
    """
    checks = 0
    idxc = 0
    if t + y > ymax + epsy:
        return IMPOSSIBLE, y, checks, idxc
    lo = b + y
    hi = t + y
    shifted = False
    # Locate the first tuple not strictly below the piece tuple; lower
    # ones can never block.  Column tuples are sorted and disjoint, so a
    # binary search on the tops finds it.
    l = 0
    if cnt > 0 and st2[k, 0] < lo - epsy:
        hi_i = cnt
        while l < hi_i:
            mid = (l + hi_i) >> 1
            idxc += 1
            if st2[k, mid] < lo - epsy:
                l = mid + 1
            else:
                hi_i = mid
    while l < cnt:
        bs = sb2[k, l]
        ts = st2[k, l]
        ls = slab2[k, l]
        checks += 1
        if bs > hi + epsy:
            # Strictly above the piece tuple; later tuples higher still.
            break
        # Positive-length intersection of claims sharing a side blocks;
        # complementary (R against L) overlap and endpoint contact do not.
        lo2 = lo if lo > bs else bs
        hi2 = hi if hi < ts else ts
        comp = (lab == 1 and ls == 2) or (lab == 2 and ls == 1)
        if hi2 - lo2 > epsy and not comp:
            ycand = ts - b
            if ycand > y + epsy:
                y = ycand
                lo = b + y
                hi = t + y
                shifted = True
                if hi > ymax + epsy:
                    return IMPOSSIBLE, y, checks, idxc
        l += 1
    if shifted:
        return SHIFTED, y, checks, idxc
    return FITS, y, checks, idxc


def _place_one(sb2, st2, slab2, scnt, order, pb, pt, plab, pcolptr, m0, y0, ymax, epsy):
    """Bottom-left-fill search for one semi-discrete piece.

    Columns are visited in the given check order; a pass with at least
    one translation update is rerun, a column where no shift fits below
    ymax advances the piece one resolution line to the right.  Returns
    (m, y, checks, index_checks, tv_updates, right_shifts).
    """
    m = m0
    y = y0
    checks = 0
    idxc = 0
    tvu = 0
    rsh = 0
    nrows = scnt.shape[0]
    while True:
        updated = False
        restart = False
        for oi in range(order.shape[0]):
            i = order[oi]
            k = m + i
            cnt = 0
            if k < nrows:
                cnt = scnt[k]
            for j in range(pcolptr[i], pcolptr[i + 1]):
                code, ynew, c, ic = _FIT(
                    sb2, st2, slab2, k, cnt, pb[j], pt[j], plab[j], y, ymax, epsy
                )
                checks += c
                idxc += ic
                if code == 1:
                    y = ynew
                    tvu += 1
                    updated = True
                elif code == 2:
                    m += 1
                    y = 0.0
                    rsh += 1
                    restart = True
                    break
            if restart:
                break
        if restart:
            continue
        if not updated:
            break
    return m, y, checks, idxc, tvu, rsh


def _nearest_breakpoint(pts, npts, x):
    """Index of the clustered breakpoint nearest to x (binary search)."""
    lo = 0
    hi = npts
    while lo < hi:
        mid = (lo + hi) // 2
        if pts[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    if lo == npts or (lo > 0 and x - pts[lo - 1] < pts[lo] - x):
        lo -= 1
    return lo


def _commit_core(
    sb2, st2, slab2, scnt, pb, pt, plab, pcolptr, m, y, epsy,
    staged_b, staged_t, staged_l, staged_n, staged_w0, staged_w1,
    tb, tt, tm, vals, pts, seg,
):
    """Write a placed piece into the strip arrays (allocation free).

    Each affected column is updated by windowed side-mask resolution:
    only the filled tuples whose extent meets the span of the incoming
    claims are re-resolved together with those claims; every elementary
    y-segment carries the OR of the side masks of the claims covering it
    (M covers both sides, R the right, L the left), a segment claimed on
    both sides becomes M, and adjacent same-label segments touching
    within tolerance merge.  Mask resolution is local, so this equals a
    full-column rebuild while doing work proportional to the overlap
    only.  Zero-length claims are dropped: they can never conflict and
    never drive a shift.  Returns COMMIT_OK, or COMMIT_OVERFLOW when a
    row or column capacity is exceeded (caller grows and retries;
    nothing was mutated).  All scratch arrays are caller-provided so
    batch runs pay no per-copy allocation cost.
    """
    npc = pcolptr.shape[0] - 1
    nrows = sb2.shape[0]
    cap = sb2.shape[1]
    if m + npc > nrows:
        return COMMIT_OVERFLOW

    # Phase 1: stage the resolved window of every column; no mutation.
    for i in range(npc):
        k = m + i
        cnt = scnt[k]
        nc = 0
        for p in range(pcolptr[i], pcolptr[i + 1]):
            bb = pb[p] + y
            te = pt[p] + y
            if te - bb <= epsy:
                continue
            tb[nc] = bb
            tt[nc] = te
            tm[nc] = 3 if plab[p] == 0 else plab[p]
            nc += 1
        if nc == 0:
            staged_n[i] = -1
            continue
        span_b = tb[0]
        span_t = tt[0]
        for j in range(1, nc):
            if tb[j] < span_b:
                span_b = tb[j]
            if tt[j] > span_t:
                span_t = tt[j]

        # Window of filled tuples overlapping the claims over a positive
        # length.  Tuples that merely touch the span resolve unchanged;
        # same-label touches are merged during the splice below.
        w0 = 0
        while w0 < cnt and st2[k, w0] <= span_b + epsy:
            w0 += 1
        w1 = w0
        while w1 < cnt and sb2[k, w1] < span_t - epsy:
            w1 += 1

        if w1 == w0:
            # Nothing to re-resolve: the claims are already disjoint,
            # sorted and side-resolved; merge same-label neighbors only.
            ow = 0
            for j in range(nc):
                lb = np.int8(0) if tm[j] == 3 else np.int8(tm[j])
                if (
                    ow > 0
                    and staged_l[i, ow - 1] == lb
                    and tb[j] - staged_t[i, ow - 1] <= epsy
                ):
                    staged_t[i, ow - 1] = tt[j]
                else:
                    if ow >= cap:
                        return COMMIT_OVERFLOW
                    staged_b[i, ow] = tb[j]
                    staged_t[i, ow] = tt[j]
                    staged_l[i, ow] = lb
                    ow += 1
            if cnt + ow > cap:
                return COMMIT_OVERFLOW
            staged_n[i] = ow
            staged_w0[i] = w0
            staged_w1[i] = w1
            continue

        total = nc + (w1 - w0)
        if total > tb.shape[0]:
            return COMMIT_OVERFLOW
        w = nc
        for a in range(w0, w1):
            tb[w] = sb2[k, a]
            tt[w] = st2[k, a]
            tm[w] = 3 if slab2[k, a] == 0 else slab2[k, a]
            w += 1

        # Cluster endpoints into canonical breakpoints.  Counts are tiny
        # (a few claims plus the window), so insertion sort beats a
        # library sort call here.
        n2 = 2 * total
        for j in range(total):
            vals[2 * j] = tb[j]
            vals[2 * j + 1] = tt[j]
        for j in range(1, n2):
            v = vals[j]
            a = j - 1
            while a >= 0 and vals[a] > v:
                vals[a + 1] = vals[a]
                a -= 1
            vals[a + 1] = v
        npts = 0
        for j in range(2 * total):
            if npts == 0 or vals[j] - pts[npts - 1] > epsy:
                pts[npts] = vals[j]
                npts += 1

        for s in range(npts):
            seg[s] = 0
        for j in range(total):
            jb = _nearest_breakpoint(pts, npts, tb[j])
            jt = _nearest_breakpoint(pts, npts, tt[j])
            for s in range(jb, jt):
                seg[s] |= tm[j]

        ow = 0
        cb = 0.0
        ct = 0.0
        cl = np.int8(0)
        have = False
        for s in range(npts - 1):
            if seg[s] == 0:
                if have:
                    if ow >= cap:
                        return COMMIT_OVERFLOW
                    staged_b[i, ow] = cb
                    staged_t[i, ow] = ct
                    staged_l[i, ow] = cl
                    ow += 1
                    have = False
                continue
            slab = np.int8(0) if seg[s] == 3 else seg[s]
            if have and slab == cl:
                ct = pts[s + 1]
            else:
                if have:
                    if ow >= cap:
                        return COMMIT_OVERFLOW
                    staged_b[i, ow] = cb
                    staged_t[i, ow] = ct
                    staged_l[i, ow] = cl
                    ow += 1
                cb = pts[s]
                ct = pts[s + 1]
                cl = slab
                have = True
        if have:
            if ow >= cap:
                return COMMIT_OVERFLOW
            staged_b[i, ow] = cb
            staged_t[i, ow] = ct
            staged_l[i, ow] = cl
            ow += 1
        if cnt - (w1 - w0) + ow > cap:
            return COMMIT_OVERFLOW
        staged_n[i] = ow
        staged_w0[i] = w0
        staged_w1[i] = w1

    # Phase 2: splice the resolved windows back in place.  Same-label
    # segments touching within tolerance at a window boundary merge by
    # extending the boundary resolved segment over its neighbor, so only
    # the suffix beyond the window ever moves.
    for i in range(npc):
        ow = staged_n[i]
        if ow < 0:
            continue
        k = m + i
        cnt = scnt[k]
        w0 = staged_w0[i]
        w1 = staged_w1[i]
        if (
            w0 > 0
            and slab2[k, w0 - 1] == staged_l[i, 0]
            and staged_b[i, 0] - st2[k, w0 - 1] <= epsy
        ):
            staged_b[i, 0] = sb2[k, w0 - 1]
            if st2[k, w0 - 1] > staged_t[i, 0]:
                staged_t[i, 0] = st2[k, w0 - 1]
            w0 -= 1
        if (
            w1 < cnt
            and slab2[k, w1] == staged_l[i, ow - 1]
            and sb2[k, w1] - staged_t[i, ow - 1] <= epsy
        ):
            if st2[k, w1] > staged_t[i, ow - 1]:
                staged_t[i, ow - 1] = st2[k, w1]
            if sb2[k, w1] < staged_b[i, ow - 1]:
                staged_b[i, ow - 1] = sb2[k, w1]
            w1 += 1
        delta = ow - (w1 - w0)
        if delta > 0:
            for a in range(cnt - 1, w1 - 1, -1):
                sb2[k, a + delta] = sb2[k, a]
                st2[k, a + delta] = st2[k, a]
                slab2[k, a + delta] = slab2[k, a]
        elif delta < 0:
            for a in range(w1, cnt):
                sb2[k, a + delta] = sb2[k, a]
                st2[k, a + delta] = st2[k, a]
                slab2[k, a + delta] = slab2[k, a]
        for j in range(ow):
            sb2[k, w0 + j] = staged_b[i, j]
            st2[k, w0 + j] = staged_t[i, j]
            slab2[k, w0 + j] = staged_l[i, j]
        scnt[k] = cnt + delta
    return COMMIT_OK


def _commit_scratch(cap, npc, pcolptr):
    maxpc = 0
    for i in range(npc):
        w = pcolptr[i + 1] - pcolptr[i]
        if w > maxpc:
            maxpc = w
    tot = cap + maxpc
    return (
        np.empty((npc, cap)),
        np.empty((npc, cap)),
        np.empty((npc, cap), np.int8),
        np.empty(npc, np.int64),
        np.empty(npc, np.int64),
        np.empty(npc, np.int64),
        np.empty(tot),
        np.empty(tot),
        np.empty(tot, np.int8),
        np.empty(2 * tot),
        np.empty(2 * tot),
        np.empty(2 * tot, np.int8),
    )


def _commit_one(sb2, st2, slab2, scnt, pb, pt, plab, pcolptr, m, y, epsy):
    """One-shot commit: allocates its own scratch and delegates."""
    npc = pcolptr.shape[0] - 1
    cap = sb2.shape[1]
    sc = _SCRATCH(cap, npc, pcolptr)
    return _COMMIT_CORE(
        sb2, st2, slab2, scnt, pb, pt, plab, pcolptr, m, y, epsy,
        sc[0], sc[1], sc[2], sc[3], sc[4], sc[5],
        sc[6], sc[7], sc[8], sc[9], sc[10], sc[11],
    )


def _place_run(
    sb2,
    st2,
    slab2,
    scnt,
    order,
    pb,
    pt,
    plab,
    pcolptr,
    ncopies,
    m0,
    y0,
    ymax,
    epsy,
    out_m,
    out_y,
    out_counters,
):
    """Place and commit ncopies identical pieces, warm-starting each copy
    from the previous final vector.  Returns (copies_done, status); a
    non-zero status means capacity ran out and the caller should grow the
    arrays and resume from copies_done.
    """
    m = m0
    y = y0
    npc = pcolptr.shape[0] - 1
    cap = sb2.shape[1]
    sc = _SCRATCH(cap, npc, pcolptr)
    for c in range(ncopies):
        m, y, ch, ic, tv, rs = _PLACE(
            sb2, st2, slab2, scnt, order, pb, pt, plab, pcolptr, m, y, ymax, epsy
        )
        status = _COMMIT_CORE(
            sb2, st2, slab2, scnt, pb, pt, plab, pcolptr, m, y, epsy,
            sc[0], sc[1], sc[2], sc[3], sc[4], sc[5],
            sc[6], sc[7], sc[8], sc[9], sc[10], sc[11],
        )
        if status != 0:
            return c, status
        out_m[c] = m
        out_y[c] = y
        out_counters[c, 0] = ch
        out_counters[c, 1] = ic
        out_counters[c, 2] = tv
        out_counters[c, 3] = rs
    return ncopies, 0


if USE_NUMBA:
    fit_column = njit(cache=True)(_fit_column)
    _nearest_breakpoint = njit(cache=True, inline="always")(_nearest_breakpoint)
    _FIT = njit(cache=True, inline="always")(_fit_column)
    place_one = njit(cache=True)(_place_one)
    _PLACE = njit(cache=True, inline="always")(_place_one)
    _COMMIT_CORE = njit(cache=True, inline="always")(_commit_core)
    _SCRATCH = njit(cache=True)(_commit_scratch)
    commit_one = njit(cache=True)(_commit_one)
    place_run = njit(cache=True)(_place_run)
else:
    _FIT = _fit_column
    fit_column = _fit_column
    _PLACE = _place_one
    place_one = _place_one
    _COMMIT_CORE = _commit_core
    _SCRATCH = _commit_scratch
    commit_one = _commit_one
    place_run = _place_run
