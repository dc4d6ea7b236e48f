"""Pure NumPy implementations of the DP kernels.

Used when the compiled extension is unavailable (or forced via
``RESIDENCY_BACKEND=pure``). Each function mirrors its compiled counterpart
exactly, including tie-breaking, and returns the same tuple:

    (score, segment_count, final_t, final_lp, final_l, S, C, BT, BL)

where ``S``/``C`` are the per-cell score/segment-count tables, ``BT``/``BL``
the back-pointers (predecessor index and predecessor location, -1 for the
virtual start), and ``final_*`` describe the chosen last segment: it begins
right after index ``final_t`` with location ``final_l``; ``final_lp`` is the
location of the preceding cell, -1 when the last segment is the only one.

Candidates for a cell are ranked by (score, segment count) and ties resolved
by smallest predecessor index, then smallest predecessor location; the final
answer additionally prefers the smallest final location. All floating-point
expressions match the compiled kernels operation for operation, so both
backends return identical solutions.
"""

from __future__ import annotations

import numpy as np

_HUGE_COUNT = np.iinfo(np.int64).max


def rle_encode(values):
    """Run-length encode a non-empty int64 array: (run values, run counts)."""
    n = values.size
    change = np.flatnonzero(values[1:] != values[:-1]) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change, [n]))
    return values[starts], ends - starts


def _empty_tables(rows: int, n_locations: int):
    S = np.full((rows, n_locations), np.inf)
    C = np.zeros((rows, n_locations), dtype=np.int64)
    BT = np.full((rows, n_locations), -1, dtype=np.int64)
    BL = np.full((rows, n_locations), -1, dtype=np.int64)
    return S, C, BT, BL


class _BestOther:
    """Per-row best and second-best cells over locations, in (score, count,
    location) lexicographic order. Lets a transition exclude one location
    without rescanning the row."""

    def __init__(self, rows: int):
        self.v1 = np.full(rows, np.inf)
        self.c1 = np.zeros(rows, dtype=np.int64)
        self.a1 = np.full(rows, -1, dtype=np.int64)
        self.v2 = np.full(rows, np.inf)
        self.c2 = np.zeros(rows, dtype=np.int64)
        self.a2 = np.full(rows, -1, dtype=np.int64)

    def update_row(self, row: int, scores: np.ndarray, counts: np.ndarray):
        L = scores.size
        order = np.lexsort((np.arange(L), counts, scores))
        b = order[0]
        self.v1[row] = scores[b]
        self.c1[row] = counts[b]
        self.a1[row] = b
        if L > 1:
            b = order[1]
            self.v2[row] = scores[b]
            self.c2[row] = counts[b]
            self.a2[row] = b

    def excluding(self, rows: np.ndarray, n_locations: int):
        """(value, count, arg) of the best cell per (row, l) with location != l."""
        sel = self.a1[rows][:, None] == np.arange(n_locations)[None, :]
        ov = np.where(sel, self.v2[rows][:, None], self.v1[rows][:, None])
        oc = np.where(sel, self.c2[rows][:, None], self.c1[rows][:, None])
        oa = np.where(sel, self.a2[rows][:, None], self.a1[rows][:, None])
        return ov, oc, oa


def _first_lexmin_grid(cs: np.ndarray, cc: np.ndarray):
    """Index (row, col) of the first (score, count)-minimal entry in row-major
    order, or None when everything is infinite."""
    ms = cs.min()
    if not np.isfinite(ms):
        return None
    tie = cs == ms
    mc = np.where(tie, cc, _HUGE_COUNT).min()
    flat = int(np.flatnonzero((tie & (cc == mc)).ravel())[0])
    return ms, int(mc), flat // cs.shape[1], flat % cs.shape[1]


class _Final:
    """Running best final answer with strict-improvement updates."""

    def __init__(self):
        self.score = np.inf
        self.count = 0
        self.t = -1
        self.lp = -1
        self.l = -1

    def offer(self, score, count, t, lp, l):
        if score < self.score or (score == self.score and count < self.count):
            self.score = float(score)
            self.count = int(count)
            self.t = int(t)
            self.lp = int(lp)
            self.l = int(l)


def _fill_cell_vectorized(S, C, BT, BL, other, row, l_count,
                          base_s, base_ok, ts, trans_s_fn):
    """Compute one DP row from a base candidate plus transition rows ``ts``.

    ``trans_s_fn(ov, oc, ts)`` returns (cand_scores, cand_counts) matrices of
    shape (len(ts), l_count). Candidate order is base first, then ``ts``
    ascending, matching the compiled kernels.
    """
    l_idx = np.arange(l_count)
    if ts.size:
        ov, oc, oa = other.excluding(ts, l_count)
        cs, cc = trans_s_fn(ov, oc)
        if base_ok:
            cs_all = np.vstack((base_s[None, :], cs))
            cc_all = np.vstack((np.ones((1, l_count), dtype=np.int64), cc))
            row_offset = 1
        else:
            cs_all, cc_all, row_offset = cs, cc, 0
        ms = cs_all.min(axis=0)
        finite = np.isfinite(ms)
        mc = np.where(cs_all == ms[None, :], cc_all, _HUGE_COUNT).min(axis=0)
        rows = ((cs_all == ms[None, :]) & (cc_all == mc[None, :])).argmax(axis=0)
        S[row] = np.where(finite, ms, np.inf)
        C[row] = np.where(finite, mc, 0)
        from_base = (rows == 0) & base_ok if base_ok else np.zeros(l_count, bool)
        tr = np.maximum(rows - row_offset, 0)
        BT[row] = np.where(finite, np.where(from_base, 0, ts[tr]), -1)
        BL[row] = np.where(finite, np.where(from_base, -1, oa[tr, l_idx]), -1)
    elif base_ok:
        S[row] = base_s
        C[row] = 1
        BT[row] = 0
        BL[row] = -1
    other.update_row(row, S[row], C[row])


def daylevel_solve(P, pen, rho, relaxed):
    """Day-indexed DP over all units.

    ``P[l, t]`` is the cumulative cost of units ``1..t`` under residence
    ``l``; ``pen`` an optional per-duration penalty table. Cell ``(i, l)``
    covers a tiling of ``1..i`` whose segments all span >= rho units and end
    in location ``l``.
    """
    L, n1 = P.shape
    n = n1 - 1
    S, C, BT, BL = _empty_tables(n + 1, L)
    other = _BestOther(n + 1)

    for i in range(rho, n + 1):
        base_s = P[:, i] + (pen[i] if pen is not None else 0.0)
        ts = np.arange(rho, i - rho + 1)

        def trans(ov, oc, _i=i, _ts=ts):
            seg = P[:, _i][None, :] - P[:, _ts].T
            if pen is not None:
                seg = seg + pen[_i - _ts][:, None]
            return ov + seg, oc + 1

        _fill_cell_vectorized(S, C, BT, BL, other, i, L, base_s, True, ts, trans)

    fin = _Final()
    pen_n = pen[n] if pen is not None else 0.0
    for l in range(L):
        fin.offer(P[l, n] + pen_n, 1, 0, -1, l)
    if relaxed:
        ts = np.arange(rho, n)
        if ts.size:
            ov, oc, oa = other.excluding(ts, L)
            seg = P[:, n][None, :] - P[:, ts].T
            if pen is not None:
                seg = seg + pen[n - ts][:, None]
            hit = _first_lexmin_grid(ov + seg, oc + 1)
            if hit is not None:
                ms, mc, r, c = hit
                fin.offer(ms, mc, ts[r], oa[r, c], c)
    else:
        for l in range(L):
            if np.isfinite(S[n, l]):
                fin.offer(S[n, l], C[n, l], BT[n, l], BL[n, l], l)
    return fin.score, fin.count, fin.t, fin.lp, fin.l, S, C, BT, BL


def boundary_solve(PC, D, pen, rho, relaxed):
    """Position-indexed DP over a restricted set of segment boundaries.

    ``D`` holds allowed boundary days ascending with ``D[0] = 1`` and
    ``D[-1] = n + 1``; ``PC[l, j]`` is the cumulative cost of units
    ``1..D[j]-1`` under ``l``. Cell ``(j, l)`` covers ``1..D[j]-1``.
    """
    L, M = PC.shape
    n = int(D[M - 1]) - 1
    S, C, BT, BL = _empty_tables(M, L)
    other = _BestOther(M)

    for j in range(1, M):
        dj = int(D[j])
        hi = int(np.searchsorted(D, dj - rho, side="right")) - 1
        hi = min(hi, j - 1)
        base_ok = hi >= 0
        base_s = PC[:, j] + (pen[dj - 1] if pen is not None else 0.0)
        ts = np.arange(1, hi + 1)

        def trans(ov, oc, _j=j, _dj=dj, _ts=ts):
            seg = PC[:, _j][None, :] - PC[:, _ts].T
            if pen is not None:
                seg = seg + pen[_dj - D[_ts]][:, None]
            return ov + seg, oc + 1

        _fill_cell_vectorized(S, C, BT, BL, other, j, L, base_s, base_ok, ts, trans)

    fin = _Final()
    pen_n = pen[n] if pen is not None else 0.0
    for l in range(L):
        fin.offer(PC[l, M - 1] + pen_n, 1, 0, -1, l)
    if relaxed:
        ts = np.arange(1, M - 1)
        if ts.size:
            ov, oc, oa = other.excluding(ts, L)
            seg = PC[:, M - 1][None, :] - PC[:, ts].T
            if pen is not None:
                seg = seg + pen[n + 1 - D[ts]][:, None]
            hit = _first_lexmin_grid(ov + seg, oc + 1)
            if hit is not None:
                ms, mc, r, c = hit
                fin.offer(ms, mc, ts[r], oa[r, c], c)
    else:
        for l in range(L):
            if np.isfinite(S[M - 1, l]):
                fin.offer(S[M - 1, l], C[M - 1, l], BT[M - 1, l], BL[M - 1, l], l)
    return fin.score, fin.count, fin.t, fin.lp, fin.l, S, C, BT, BL


def warped_solve(RC, cum, pen, rho, relaxed, literal):
    """Run-indexed DP with residence changes restricted to run boundaries.

    ``RC[l, r]`` is the cumulative cost of runs ``1..r`` under ``l`` and
    ``cum[r]`` the unit count of those runs. Under the exclusive window rule
    a segment of runs ``t+1..i`` needs ``cum[i] - cum[t] >= rho``; under the
    literal rule the window is measured from the previous segment's final
    run, ``cum[i] - cum[t-1] >= rho``, which can admit segments shorter than
    rho. First segments always need ``cum[i] >= rho`` themselves.
    """
    L = RC.shape[0]
    k = cum.size - 1
    n = int(cum[k])
    S, C, BT, BL = _empty_tables(k + 1, L)
    other = _BestOther(k + 1)

    for i in range(1, k + 1):
        hi = int(np.searchsorted(cum, cum[i] - rho, side="right")) - 1
        base_ok = hi >= 0
        if literal:
            t_hi = min(hi + 1, i - 1)
        else:
            t_hi = min(hi, i - 1)
        base_s = RC[:, i] + (pen[cum[i]] if pen is not None else 0.0)
        ts = np.arange(1, t_hi + 1)

        def trans(ov, oc, _i=i, _ts=ts):
            seg = RC[:, _i][None, :] - RC[:, _ts].T
            if pen is not None:
                seg = seg + pen[cum[_i] - cum[_ts]][:, None]
            return ov + seg, oc + 1

        _fill_cell_vectorized(S, C, BT, BL, other, i, L, base_s, base_ok, ts, trans)

    fin = _Final()
    pen_n = pen[n] if pen is not None else 0.0
    for l in range(L):
        fin.offer(RC[l, k] + pen_n, 1, 0, -1, l)
    if relaxed:
        ts = np.arange(1, k)
        if ts.size:
            ov, oc, oa = other.excluding(ts, L)
            seg = RC[:, k][None, :] - RC[:, ts].T
            if pen is not None:
                seg = seg + pen[n - cum[ts]][:, None]
            hit = _first_lexmin_grid(ov + seg, oc + 1)
            if hit is not None:
                ms, mc, r, c = hit
                fin.offer(ms, mc, ts[r], oa[r, c], c)
    else:
        for l in range(L):
            if np.isfinite(S[k, l]):
                fin.offer(S[k, l], C[k, l], BT[k, l], BL[k, l], l)
    return fin.score, fin.count, fin.t, fin.lp, fin.l, S, C, BT, BL
