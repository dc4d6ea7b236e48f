# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DP kernels.

Same contract and tie-breaking as residency._pure (see its module docstring);
these are the tight-loop versions of the three solvers. Floating-point
expressions are associated identically to the numpy fallback so both
backends return bit-identical solutions.
"""

import numpy as np

from libc.math cimport INFINITY

ctypedef long long i64


def rle_encode(const i64[::1] values):
    """Run-length encode a non-empty int64 array: (run values, run counts).

    Single pass into a scratch buffer of run-start indices; the buffer is
    grown geometrically so histories with few runs never pay for an
    n-sized allocation.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t cap = 64
    starts_arr = np.empty(cap, dtype=np.int64)
    cdef i64[::1] starts = starts_arr
    cdef Py_ssize_t k = 1
    cdef Py_ssize_t i
    cdef i64 cur = values[0]
    starts[0] = 0
    for i in range(1, n):
        if values[i] != cur:
            if k == cap:
                cap = cap * 2
                starts_arr = np.resize(starts_arr, cap)
                starts = starts_arr
            starts[k] = i
            k += 1
            cur = values[i]
    out_values = np.empty(k, dtype=np.int64)
    out_counts = np.empty(k, dtype=np.int64)
    cdef i64[::1] ov = out_values
    cdef i64[::1] oc = out_counts
    for i in range(k - 1):
        ov[i] = values[starts[i]]
        oc[i] = starts[i + 1] - starts[i]
    ov[k - 1] = values[starts[k - 1]]
    oc[k - 1] = n - starts[k - 1]
    return out_values, out_counts


def daylevel_solve(const double[:, ::1] P, pen_obj, i64 rho, bint relaxed):
    """Day-indexed DP; P is the (L, n+1) per-location cost prefix table."""
    cdef Py_ssize_t L = P.shape[0]
    cdef Py_ssize_t n = P.shape[1] - 1
    S_arr = np.full((n + 1, L), np.inf)
    C_arr = np.zeros((n + 1, L), dtype=np.int64)
    BT_arr = np.full((n + 1, L), -1, dtype=np.int64)
    BL_arr = np.full((n + 1, L), -1, dtype=np.int64)
    cdef double[:, ::1] S = S_arr
    cdef i64[:, ::1] C = C_arr
    cdef i64[:, ::1] BT = BT_arr
    cdef i64[:, ::1] BL = BL_arr
    cdef bint has_pen = pen_obj is not None
    cdef const double[::1] pen
    if has_pen:
        pen = pen_obj

    cdef Py_ssize_t i, l, t, lp
    cdef double bs, cs, seg
    cdef i64 bc, cc, bbt, bbl

    for i in range(rho, n + 1):
        for l in range(L):
            # base: the whole prefix as a first segment (i >= rho here)
            bs = P[l, i] + (pen[i] if has_pen else 0.0)
            bc = 1
            bbt = 0
            bbl = -1
            for t in range(rho, i - rho + 1):
                seg = P[l, i] - P[l, t]
                if has_pen:
                    seg = seg + pen[i - t]
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    cs = S[t, lp] + seg
                    cc = C[t, lp] + 1
                    if cs < bs or (cs == bs and cc < bc):
                        bs = cs
                        bc = cc
                        bbt = t
                        bbl = lp
            S[i, l] = bs
            C[i, l] = bc
            BT[i, l] = bbt
            BL[i, l] = bbl

    cdef double fs = INFINITY
    cdef i64 fc = 0
    cdef i64 ft = 0, flp = -1, fl = -1
    cdef double pen_n = pen[n] if has_pen else 0.0
    for l in range(L):
        cs = P[l, n] + pen_n
        if cs < fs or (cs == fs and 1 < fc):
            fs = cs
            fc = 1
            ft = 0
            flp = -1
            fl = l
    if relaxed:
        for t in range(rho, n):
            for l in range(L):
                bs = INFINITY
                bc = 0
                bbl = -1
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    if S[t, lp] < bs or (S[t, lp] == bs and C[t, lp] < bc):
                        bs = S[t, lp]
                        bc = C[t, lp]
                        bbl = lp
                if bs == INFINITY:
                    continue
                seg = P[l, n] - P[l, t]
                if has_pen:
                    seg = seg + pen[n - t]
                cs = bs + seg
                cc = bc + 1
                if cs < fs or (cs == fs and cc < fc):
                    fs = cs
                    fc = cc
                    ft = t
                    flp = bbl
                    fl = l
    else:
        for l in range(L):
            if S[n, l] == INFINITY:
                continue
            if S[n, l] < fs or (S[n, l] == fs and C[n, l] < fc):
                fs = S[n, l]
                fc = C[n, l]
                ft = BT[n, l]
                flp = BL[n, l]
                fl = l
    return float(fs), int(fc), int(ft), int(flp), int(fl), S_arr, C_arr, BT_arr, BL_arr


def boundary_solve(const double[:, ::1] PC, const i64[::1] D, pen_obj, i64 rho, bint relaxed):
    """Position-indexed DP over allowed boundary days D (ascending, D[0]=1)."""
    cdef Py_ssize_t L = PC.shape[0]
    cdef Py_ssize_t M = PC.shape[1]
    cdef i64 n = D[M - 1] - 1
    S_arr = np.full((M, L), np.inf)
    C_arr = np.zeros((M, L), dtype=np.int64)
    BT_arr = np.full((M, L), -1, dtype=np.int64)
    BL_arr = np.full((M, L), -1, dtype=np.int64)
    cdef double[:, ::1] S = S_arr
    cdef i64[:, ::1] C = C_arr
    cdef i64[:, ::1] BT = BT_arr
    cdef i64[:, ::1] BL = BL_arr
    cdef bint has_pen = pen_obj is not None
    cdef const double[::1] pen
    if has_pen:
        pen = pen_obj

    cdef Py_ssize_t j, l, t, lp
    cdef i64 dj
    cdef double bs, cs, seg
    cdef i64 bc, cc, bbt, bbl

    for j in range(1, M):
        dj = D[j]
        for l in range(L):
            bs = INFINITY
            bc = 0
            bbt = -1
            bbl = -1
            if dj - 1 >= rho:
                bs = PC[l, j] + (pen[dj - 1] if has_pen else 0.0)
                bc = 1
                bbt = 0
                bbl = -1
            for t in range(1, j):
                if dj - D[t] < rho:
                    break  # D ascending: later t only get shorter
                seg = PC[l, j] - PC[l, t]
                if has_pen:
                    seg = seg + pen[dj - D[t]]
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    cs = S[t, lp] + seg
                    cc = C[t, lp] + 1
                    if cs < bs or (cs == bs and cc < bc):
                        bs = cs
                        bc = cc
                        bbt = t
                        bbl = lp
            S[j, l] = bs
            C[j, l] = bc
            BT[j, l] = bbt
            BL[j, l] = bbl

    cdef double fs = INFINITY
    cdef i64 fc = 0
    cdef i64 ft = 0, flp = -1, fl = -1
    cdef double pen_n = pen[n] if has_pen else 0.0
    for l in range(L):
        cs = PC[l, M - 1] + pen_n
        if cs < fs or (cs == fs and 1 < fc):
            fs = cs
            fc = 1
            ft = 0
            flp = -1
            fl = l
    if relaxed:
        for t in range(1, M - 1):
            for l in range(L):
                bs = INFINITY
                bc = 0
                bbl = -1
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    if S[t, lp] < bs or (S[t, lp] == bs and C[t, lp] < bc):
                        bs = S[t, lp]
                        bc = C[t, lp]
                        bbl = lp
                if bs == INFINITY:
                    continue
                seg = PC[l, M - 1] - PC[l, t]
                if has_pen:
                    seg = seg + pen[n + 1 - D[t]]
                cs = bs + seg
                cc = bc + 1
                if cs < fs or (cs == fs and cc < fc):
                    fs = cs
                    fc = cc
                    ft = t
                    flp = bbl
                    fl = l
    else:
        for l in range(L):
            if S[M - 1, l] == INFINITY:
                continue
            if S[M - 1, l] < fs or (S[M - 1, l] == fs and C[M - 1, l] < fc):
                fs = S[M - 1, l]
                fc = C[M - 1, l]
                ft = BT[M - 1, l]
                flp = BL[M - 1, l]
                fl = l
    return float(fs), int(fc), int(ft), int(flp), int(fl), S_arr, C_arr, BT_arr, BL_arr


def warped_solve(const double[:, ::1] RC, const i64[::1] cum, pen_obj, i64 rho,
                 bint relaxed, bint literal):
    """Run-indexed DP; RC is the (L, runs+1) cumulative run cost table."""
    cdef Py_ssize_t L = RC.shape[0]
    cdef Py_ssize_t k = cum.shape[0] - 1
    cdef i64 n = cum[k]
    S_arr = np.full((k + 1, L), np.inf)
    C_arr = np.zeros((k + 1, L), dtype=np.int64)
    BT_arr = np.full((k + 1, L), -1, dtype=np.int64)
    BL_arr = np.full((k + 1, L), -1, dtype=np.int64)
    cdef double[:, ::1] S = S_arr
    cdef i64[:, ::1] C = C_arr
    cdef i64[:, ::1] BT = BT_arr
    cdef i64[:, ::1] BL = BL_arr
    cdef bint has_pen = pen_obj is not None
    cdef const double[::1] pen
    if has_pen:
        pen = pen_obj

    cdef Py_ssize_t i, l, t, lp
    cdef double bs, cs, seg
    cdef i64 bc, cc, bbt, bbl

    for i in range(1, k + 1):
        for l in range(L):
            bs = INFINITY
            bc = 0
            bbt = -1
            bbl = -1
            if cum[i] >= rho:
                bs = RC[l, i] + (pen[cum[i]] if has_pen else 0.0)
                bc = 1
                bbt = 0
                bbl = -1
            for t in range(1, i):
                if literal:
                    if cum[i] - cum[t - 1] < rho:
                        break  # cum ascending: window only shrinks
                else:
                    if cum[i] - cum[t] < rho:
                        break
                seg = RC[l, i] - RC[l, t]
                if has_pen:
                    seg = seg + pen[cum[i] - cum[t]]
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    cs = S[t, lp] + seg
                    cc = C[t, lp] + 1
                    if cs < bs or (cs == bs and cc < bc):
                        bs = cs
                        bc = cc
                        bbt = t
                        bbl = lp
            S[i, l] = bs
            C[i, l] = bc
            BT[i, l] = bbt
            BL[i, l] = bbl

    cdef double fs = INFINITY
    cdef i64 fc = 0
    cdef i64 ft = 0, flp = -1, fl = -1
    cdef double pen_n = pen[n] if has_pen else 0.0
    for l in range(L):
        cs = RC[l, k] + pen_n
        if cs < fs or (cs == fs and 1 < fc):
            fs = cs
            fc = 1
            ft = 0
            flp = -1
            fl = l
    if relaxed:
        for t in range(1, k):
            for l in range(L):
                bs = INFINITY
                bc = 0
                bbl = -1
                for lp in range(L):
                    if lp == l or S[t, lp] == INFINITY:
                        continue
                    if S[t, lp] < bs or (S[t, lp] == bs and C[t, lp] < bc):
                        bs = S[t, lp]
                        bc = C[t, lp]
                        bbl = lp
                if bs == INFINITY:
                    continue
                seg = RC[l, k] - RC[l, t]
                if has_pen:
                    seg = seg + pen[n - cum[t]]
                cs = bs + seg
                cc = bc + 1
                if cs < fs or (cs == fs and cc < fc):
                    fs = cs
                    fc = cc
                    ft = t
                    flp = bbl
                    fl = l
    else:
        for l in range(L):
            if S[k, l] == INFINITY:
                continue
            if S[k, l] < fs or (S[k, l] == fs and C[k, l] < fc):
                fs = S[k, l]
                fc = C[k, l]
                ft = BT[k, l]
                flp = BL[k, l]
                fl = l
    return float(fs), int(fc), int(ft), int(flp), int(fl), S_arr, C_arr, BT_arr, BL_arr
