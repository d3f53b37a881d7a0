"""Compiled downstream kernels.

Mirror of the reference module function by function; both backends must
perform the same floating-point operations in the same order so the tables
they produce agree bit for bit.  Keep any change here in lockstep with the
pure-Python version.
"""

import numpy as np

from libc.math cimport INFINITY, ceil, fabs, floor

ctypedef unsigned char u8


cdef inline int c_ceil_index(double x, int m) nogil:
    if x <= 0.0:
        return 0
    if x > 1.0:
        return m + 1
    return <int>ceil(x * m)


cdef inline int c_floor_index(double x, int m) nogil:
    if x >= 1.0:
        return m
    if x < 0.0:
        return -1
    return <int>floor(x * m)


cdef inline void c_window(int vi, int m, double eps, double *L, double *H) nogil:
    cdef double v = (<double>vi) / (<double>m)
    if vi == 0:
        L[0] = -INFINITY
    else:
        L[0] = -eps / v
    if vi == m:
        H[0] = INFINITY
    else:
        H[0] = eps / (1.0 - v)


cdef int c_fill_idx(const u8 *row, int n, int *out) nogil:
    cdef int c = 0, i
    for i in range(n):
        if row[i]:
            out[c] = i
            c += 1
    return c


cdef int c_runs(const u8 *row, int n, int *starts, int *ends) nogil:
    cdef int cnt = 0, i = 0
    while i < n:
        if row[i]:
            starts[cnt] = i
            while i + 1 < n and row[i + 1]:
                i += 1
            ends[cnt] = i
            cnt += 1
        i += 1
    return cnt


cdef bint c_window_hit(double p, double q, const int *rs, const int *re,
                       int nruns, double L, double H, int m) nogil:
    cdef double a, b
    cdef int ia, ib, r, lo, hi
    if q == 0.0:
        return nruns > 0 and L <= p <= H
    if q > 0.0:
        a = (L - p) / q
        b = (H - p) / q
    else:
        a = (H - p) / q
        b = (L - p) / q
    ia = c_ceil_index(a, m)
    ib = c_floor_index(b, m)
    if ia > ib:
        return False
    for r in range(nruns):
        lo = ia if ia > rs[r] else rs[r]
        hi = ib if ib < re[r] else re[r]
        if lo <= hi:
            return True
    return False


cdef int c_halfline(double a, double b, bint geq, double *lo, double *hi) nogil:
    cdef double r, l, h
    if not geq:
        a = -a
        b = -b
    if b == 0.0:
        if a >= 0.0:
            lo[0] = 0.0
            hi[0] = 1.0
            return 1
        return 0
    r = -a / b
    if b > 0.0:
        l = r
        h = 1.0
    else:
        l = 0.0
        h = r
    if l < 0.0:
        l = 0.0
    if h > 1.0:
        h = 1.0
    if l <= h:
        lo[0] = l
        hi[0] = h
        return 1
    return 0


cdef int c_union2(double *lo, double *hi, int n) nogil:
    cdef double tl, th
    if n < 2:
        return n
    if lo[1] < lo[0] or (lo[1] == lo[0] and hi[1] < hi[0]):
        tl = lo[0]
        th = hi[0]
        lo[0] = lo[1]
        hi[0] = hi[1]
        lo[1] = tl
        hi[1] = th
    if lo[1] <= hi[0]:
        if hi[1] > hi[0]:
            hi[0] = hi[1]
        return 1
    return 2


cdef bint c_row_full(const u8 *row, int n) nogil:
    cdef int i
    for i in range(n):
        if not row[i]:
            return False
    return True


cdef bint c_scan_bilinear(u8 *out_row, const double *d, const int *rs,
                          const int *re, int nruns, double L, double H,
                          int m) nogil:
    # returns True when the row is known to be saturated
    cdef double c00 = d[3]
    cdef double c01 = d[2] - d[3]
    cdef double c10 = d[1] - d[3]
    cdef double c11 = d[0] - d[1] - d[2] + d[3]
    cdef double q0 = fabs(c10)
    cdef double q1 = fabs(c10 + c11)
    cdef double steep = q0 if q0 > q1 else q1
    cdef double s, t, a_s, b_s, a_t, b_t, w, p, q, lo, hi
    cdef double glo[2]
    cdef double ghi[2]
    cdef double llo[2]
    cdef double lhi[2]
    cdef int gn, ln, gi, li, r, wi, ia, ib, i, misses
    cdef bint full = False
    if H - L >= steep / (<double>m):
        for r in range(nruns):
            s = (<double>rs[r]) / (<double>m)
            t = (<double>re[r]) / (<double>m)
            a_s = c00 + c10 * s
            b_s = c01 + c11 * s
            a_t = c00 + c10 * t
            b_t = c01 + c11 * t
            gn = 0
            gn += c_halfline(a_s - L, b_s, True, &glo[gn], &ghi[gn])
            gn += c_halfline(a_t - L, b_t, True, &glo[gn], &ghi[gn])
            gn = c_union2(glo, ghi, gn)
            ln = 0
            ln += c_halfline(a_s - H, b_s, False, &llo[ln], &lhi[ln])
            ln += c_halfline(a_t - H, b_t, False, &llo[ln], &lhi[ln])
            ln = c_union2(llo, lhi, ln)
            for gi in range(gn):
                for li in range(ln):
                    lo = glo[gi] if glo[gi] > llo[li] else llo[li]
                    hi = ghi[gi] if ghi[gi] < lhi[li] else lhi[li]
                    if lo <= hi:
                        ia = c_ceil_index(lo, m)
                        ib = c_floor_index(hi, m)
                        for i in range(ia, ib + 1):
                            out_row[i] = 1
                        if ia == 0 and ib == m:
                            full = True
    else:
        misses = 0
        for wi in range(m + 1):
            if out_row[wi]:
                continue
            w = (<double>wi) / (<double>m)
            p = c00 + c01 * w
            q = c10 + c11 * w
            if c_window_hit(p, q, rs, re, nruns, L, H, m):
                out_row[wi] = 1
            else:
                misses += 1
        full = misses == 0
    return full


def leaf_bits(double d_child0, double d_child1, int m, double eps):
    """Table of a vertex with no upstream neighbors."""
    bits = np.zeros((m + 1, m + 1), dtype=np.uint8)
    cdef u8[:, ::1] B = bits
    cdef int wi, ia, ib, i
    cdef double w, dd, lo, hi
    for wi in range(m + 1):
        w = (<double>wi) / (<double>m)
        dd = w * d_child0 + (1.0 - w) * d_child1
        if dd > 0.0:
            lo = 1.0 - eps / dd
            hi = 1.0
        elif dd < 0.0:
            lo = 0.0
            hi = -eps / dd
        else:
            lo = 0.0
            hi = 1.0
        ia = c_ceil_index(lo, m)
        ib = c_floor_index(hi, m)
        for i in range(ia, ib + 1):
            B[wi, i] = 1
    return bits


def internal_bits(d, parent_tables, int m, double eps):
    """Table of a vertex with upstream neighbors and a downstream one."""
    cdef int k = len(parent_tables)
    cdef int n = m + 1
    out = np.zeros((n, n), dtype=np.uint8)
    cdef u8[:, ::1] O = out
    d_arr = np.ascontiguousarray(np.asarray(d, dtype=np.float64))
    cdef double[::1] D = d_arr
    cdef int dlen = D.shape[0]
    stacked = np.ascontiguousarray(
        np.stack([np.asarray(t, dtype=np.uint8) for t in parent_tables])
    )
    cdef u8[:, :, ::1] T = stacked
    runs_s = np.empty(n, dtype=np.int32)
    runs_e = np.empty(n, dtype=np.int32)
    cdef int[::1] RS = runs_s
    cdef int[::1] RE = runs_e
    idx = np.empty((k, n), dtype=np.int32)
    cdef int[:, ::1] IDX = idx
    cnt = np.empty(k, dtype=np.int32)
    cdef int[::1] CNT = cnt
    pos = np.empty(k, dtype=np.int32)
    cdef int[::1] POS = pos
    buf_a = np.empty(dlen, dtype=np.float64)
    buf_b = np.empty(dlen, dtype=np.float64)
    cdef double[::1] BA = buf_a
    cdef double[::1] BB = buf_b
    cdef int vi, j, nruns, half, i, length, combos
    cdef bint empty, done, full
    cdef double L, H, u
    cdef const double *src
    cdef double *dst
    with nogil:
        for vi in range(n):
            empty = False
            for j in range(k):
                CNT[j] = c_fill_idx(&T[j, vi, 0], n, &IDX[j, 0])
                if CNT[j] == 0:
                    empty = True
                    break
            if empty:
                continue
            c_window(vi, m, eps, &L, &H)
            nruns = c_runs(&T[k - 1, vi, 0], n, &RS[0], &RE[0])
            if k == 1:
                c_scan_bilinear(&O[vi, 0], &D[0], &RS[0], &RE[0], nruns, L, H, m)
                continue
            for j in range(k - 1):
                POS[j] = 0
            combos = 0
            done = False
            while not done:
                src = &D[0]
                length = dlen
                for j in range(k - 1):
                    u = (<double>IDX[j, POS[j]]) / (<double>m)
                    half = length // 2
                    dst = &BB[0] if src == &BA[0] else &BA[0]
                    for i in range(half):
                        dst[i] = u * src[i] + (1.0 - u) * src[half + i]
                    src = dst
                    length = half
                full = c_scan_bilinear(&O[vi, 0], src, &RS[0], &RE[0],
                                       nruns, L, H, m)
                combos += 1
                # stop once the row saturates; check lazily because the
                # saturation signal from the scan is only a fast path
                if full or (combos % 256 == 0 and c_row_full(&O[vi, 0], n)):
                    break
                j = k - 2
                while j >= 0:
                    POS[j] += 1
                    if POS[j] < CNT[j]:
                        break
                    POS[j] = 0
                    j -= 1
                if j < 0:
                    done = True
    return np.ascontiguousarray(out.T)


def root_bits(d, parent_tables, int m, double eps):
    """Feasible root strategies; 1-D because the root has no downstream edge."""
    cdef int k = len(parent_tables)
    cdef int n = m + 1
    out = np.zeros(n, dtype=np.uint8)
    cdef u8[::1] O = out
    d_arr = np.ascontiguousarray(np.asarray(d, dtype=np.float64))
    cdef double[::1] D = d_arr
    cdef int dlen = D.shape[0]
    cdef double L, H, u
    cdef int zi, j, nruns, half, i, length
    cdef bint empty, done
    cdef const double *src
    cdef double *dst
    if k == 0:
        for zi in range(n):
            c_window(zi, m, eps, &L, &H)
            if L <= D[0] <= H:
                O[zi] = 1
        return out
    stacked = np.ascontiguousarray(
        np.stack([np.asarray(t, dtype=np.uint8) for t in parent_tables])
    )
    cdef u8[:, :, ::1] T = stacked
    runs_s = np.empty(n, dtype=np.int32)
    runs_e = np.empty(n, dtype=np.int32)
    cdef int[::1] RS = runs_s
    cdef int[::1] RE = runs_e
    idx = np.empty((k, n), dtype=np.int32)
    cdef int[:, ::1] IDX = idx
    cnt = np.empty(k, dtype=np.int32)
    cdef int[::1] CNT = cnt
    pos = np.empty(k, dtype=np.int32)
    cdef int[::1] POS = pos
    buf_a = np.empty(dlen, dtype=np.float64)
    buf_b = np.empty(dlen, dtype=np.float64)
    cdef double[::1] BA = buf_a
    cdef double[::1] BB = buf_b
    with nogil:
        for zi in range(n):
            c_window(zi, m, eps, &L, &H)
            empty = False
            for j in range(k):
                CNT[j] = c_fill_idx(&T[j, zi, 0], n, &IDX[j, 0])
                if CNT[j] == 0:
                    empty = True
                    break
            if empty:
                continue
            nruns = c_runs(&T[k - 1, zi, 0], n, &RS[0], &RE[0])
            if k == 1:
                if c_window_hit(D[1], D[0] - D[1], &RS[0], &RE[0], nruns, L, H, m):
                    O[zi] = 1
                continue
            for j in range(k - 1):
                POS[j] = 0
            done = False
            while not done:
                src = &D[0]
                length = dlen
                for j in range(k - 1):
                    u = (<double>IDX[j, POS[j]]) / (<double>m)
                    half = length // 2
                    dst = &BB[0] if src == &BA[0] else &BA[0]
                    for i in range(half):
                        dst[i] = u * src[i] + (1.0 - u) * src[half + i]
                    src = dst
                    length = half
                if c_window_hit(src[1], src[0] - src[1], &RS[0], &RE[0],
                                nruns, L, H, m):
                    O[zi] = 1
                    done = True
                    continue
                j = k - 2
                while j >= 0:
                    POS[j] += 1
                    if POS[j] < CNT[j]:
                        break
                    POS[j] = 0
                    j -= 1
                if j < 0:
                    done = True
    return out
