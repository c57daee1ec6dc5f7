# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Mirrors _pykern function by function; every arithmetic expression keeps the
same evaluation order so results match the NumPy fallback bit for bit.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, NAN
from libc.stdlib cimport free, malloc

cnp.import_array()


def pairwise_sqdist(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] xv = x
    cdef Py_ssize_t n = xv.shape[0], d = xv.shape[1]
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, j, f
    cdef double diff
    for f in range(d):
        for i in range(n):
            for j in range(n):
                diff = xv[i, f] - xv[j, f]
                ov[i, j] += diff * diff
    return out


cdef struct _Pair:
    double v
    long long i


cdef int _pair_cmp(const void* a, const void* b) noexcept nogil:
    cdef _Pair* pa = <_Pair*> a
    cdef _Pair* pb = <_Pair*> b
    if pa.v < pb.v:
        return -1
    if pa.v > pb.v:
        return 1
    if pa.i < pb.i:
        return -1
    if pa.i > pb.i:
        return 1
    return 0


from libc.stdlib cimport qsort


def best_gini_split(x, y, n_classes, min_leaf=1):
    x = np.ascontiguousarray(x, dtype=np.float64)
    yarr = np.ascontiguousarray(y, dtype=np.int64)
    cdef double[:, ::1] xv = x
    cdef long long[::1] yv = yarr
    cdef Py_ssize_t m = xv.shape[0], d = xv.shape[1]
    cdef long long nc = int(n_classes)
    cdef long long ml = int(min_leaf)
    if m < 2 or m < 2 * ml:
        return -1, NAN, INFINITY
    cdef _Pair* pairs = <_Pair*> malloc(m * sizeof(_Pair))
    cdef double* cnt = <double*> malloc(nc * sizeof(double))
    cdef double* tot = <double*> malloc(nc * sizeof(double))
    if pairs == NULL or cnt == NULL or tot == NULL:
        free(pairs); free(cnt); free(tot)
        raise MemoryError()
    cdef Py_ssize_t f, i, pos
    cdef long long c, nl, nr
    cdef double best = INFINITY, best_thr = NAN
    cdef Py_ssize_t best_feat = -1
    cdef double sl, sr, p, gl, gr, score, v1, v2, thr
    try:
        for c in range(nc):
            tot[c] = 0.0
        for i in range(m):
            tot[yv[i]] += 1.0
        for f in range(d):
            for i in range(m):
                pairs[i].v = xv[i, f]
                pairs[i].i = i
            qsort(pairs, m, sizeof(_Pair), _pair_cmp)
            for c in range(nc):
                cnt[c] = 0.0
            for pos in range(m - 1):
                cnt[yv[pairs[pos].i]] += 1.0
                nl = pos + 1
                nr = m - nl
                if pairs[pos].v >= pairs[pos + 1].v:
                    continue
                if nl < ml or nr < ml:
                    continue
                sl = 0.0
                sr = 0.0
                for c in range(nc):
                    p = cnt[c] / (<double> nl)
                    sl += p * p
                    p = (tot[c] - cnt[c]) / (<double> nr)
                    sr += p * p
                gl = 1.0 - sl
                gr = 1.0 - sr
                score = ((<double> nl) * gl + (<double> nr) * gr) / (<double> m)
                if score < best:
                    best = score
                    best_feat = f
                    v1 = pairs[pos].v
                    v2 = pairs[pos + 1].v
                    thr = 0.5 * (v1 + v2)
                    if thr >= v2:
                        thr = v1
                    best_thr = thr
    finally:
        free(pairs)
        free(cnt)
        free(tot)
    if best_feat < 0:
        return -1, NAN, INFINITY
    return int(best_feat), float(best_thr), float(best)


def best_sse_split(x, r, min_leaf=1):
    x = np.ascontiguousarray(x, dtype=np.float64)
    rarr = np.ascontiguousarray(r, dtype=np.float64)
    cdef double[:, ::1] xv = x
    cdef double[::1] rv = rarr
    cdef Py_ssize_t m = xv.shape[0], d = xv.shape[1]
    cdef long long ml = int(min_leaf)
    if m < 2 or m < 2 * ml:
        return -1, NAN, INFINITY
    cdef _Pair* pairs = <_Pair*> malloc(m * sizeof(_Pair))
    if pairs == NULL:
        raise MemoryError()
    cdef Py_ssize_t f, i, pos
    cdef long long nl, nr
    cdef double t1, t2, l1, l2, rr1, sse_l, sse_r, score, v1, v2, thr, rval
    cdef double best = INFINITY, best_thr = NAN
    cdef Py_ssize_t best_feat = -1
    try:
        for f in range(d):
            for i in range(m):
                pairs[i].v = xv[i, f]
                pairs[i].i = i
            qsort(pairs, m, sizeof(_Pair), _pair_cmp)
            t1 = 0.0
            t2 = 0.0
            for i in range(m):
                rval = rv[pairs[i].i]
                t1 += rval
                t2 += rval * rval
            l1 = 0.0
            l2 = 0.0
            for pos in range(m - 1):
                rval = rv[pairs[pos].i]
                l1 += rval
                l2 += rval * rval
                nl = pos + 1
                nr = m - nl
                if pairs[pos].v >= pairs[pos + 1].v:
                    continue
                if nl < ml or nr < ml:
                    continue
                sse_l = l2 - (l1 * l1) / (<double> nl)
                rr1 = t1 - l1
                sse_r = (t2 - l2) - (rr1 * rr1) / (<double> nr)
                score = sse_l + sse_r
                if score < best:
                    best = score
                    best_feat = f
                    v1 = pairs[pos].v
                    v2 = pairs[pos + 1].v
                    thr = 0.5 * (v1 + v2)
                    if thr >= v2:
                        thr = v1
                    best_thr = thr
    finally:
        free(pairs)
    if best_feat < 0:
        return -1, NAN, INFINITY
    return int(best_feat), float(best_thr), float(best)


def prim_mst(d2):
    d2 = np.ascontiguousarray(d2, dtype=np.float64)
    cdef double[:, ::1] dv = d2
    cdef Py_ssize_t n = dv.shape[0]
    edges = np.empty((n - 1, 2), dtype=np.int64)
    cdef long long[:, ::1] ev = edges
    in_tree = np.zeros(n, dtype=np.uint8)
    key = np.empty(n, dtype=np.float64)
    parent = np.zeros(n, dtype=np.int64)
    cdef unsigned char[::1] tv = in_tree
    cdef double[::1] kv = key
    cdef long long[::1] pv = parent
    cdef Py_ssize_t t, i, pick
    cdef double bestkey
    tv[0] = 1
    pv[0] = -1
    for i in range(n):
        kv[i] = dv[0, i]
    for t in range(n - 1):
        pick = -1
        bestkey = INFINITY
        for i in range(n):
            if tv[i] == 0 and kv[i] < bestkey:
                bestkey = kv[i]
                pick = i
        ev[t, 0] = pv[pick]
        ev[t, 1] = pick
        tv[pick] = 1
        for i in range(n):
            if tv[i] == 0 and dv[pick, i] < kv[i]:
                kv[i] = dv[pick, i]
                pv[i] = pick
    return edges


def dbscan_labels(d2, eps, min_pts):
    d2 = np.ascontiguousarray(d2, dtype=np.float64)
    cdef double[:, ::1] dv = d2
    cdef Py_ssize_t n = dv.shape[0]
    cdef double thr = float(eps) * float(eps)
    cdef long long mp = int(min_pts)
    labels = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] lv = labels
    core = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] cv = core
    queue = np.empty(n, dtype=np.int64)
    cdef long long[::1] qv = queue
    cdef Py_ssize_t i, j, head, tail, p
    cdef long long cid = 0, cnt
    for i in range(n):
        cnt = 0
        for j in range(n):
            if dv[i, j] <= thr:
                cnt += 1
        if cnt >= mp:
            cv[i] = 1
    for i in range(n):
        if lv[i] != -1 or cv[i] == 0:
            continue
        lv[i] = cid
        qv[0] = i
        head = 0
        tail = 1
        while head < tail:
            p = qv[head]
            head += 1
            for j in range(n):
                if dv[p, j] <= thr and lv[j] == -1:
                    lv[j] = cid
                    if cv[j] == 1:
                        qv[tail] = j
                        tail += 1
        cid += 1
    return labels
