# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled grid kernels; see pykernels.py for the reference semantics."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, INFINITY

cnp.import_array()


cdef inline double _dist_row(const double[:, ::1] F, Py_ssize_t i,
                             const double[::1] q, int kind, double p) noexcept nogil:
    cdef Py_ssize_t k, K = F.shape[1]
    cdef double acc = 0.0, z
    if kind == 0:
        for k in range(K):
            z = F[i, k] - q[k]
            if z > acc:
                acc = z
        return acc
    elif kind == 1:
        for k in range(K):
            z = F[i, k] - q[k]
            acc += z * z
        return sqrt(acc)
    elif kind == 3:
        for k in range(K):
            z = fabs(F[i, k] - q[k])
            if z > acc:
                acc = z
        return acc
    else:
        for k in range(K):
            acc += pow(fabs(F[i, k] - q[k]), p)
        return pow(acc, 1.0 / p)


def min_dists(double[:, ::1] F, double[::1] q, int kind, double p):
    cdef Py_ssize_t i, n = F.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _dist_row(F, i, q, kind, p)
    return out


def update_min_dists(double[:, ::1] F, double[::1] q, int kind, double p,
                     double[::1] mind):
    cdef Py_ssize_t i, n = F.shape[0]
    cdef double d
    with nogil:
        for i in range(n):
            d = _dist_row(F, i, q, kind, p)
            if d < mind[i]:
                mind[i] = d


def min_dist_to_set(double[:, ::1] F, double[:, ::1] Fc, int kind, double p):
    cdef Py_ssize_t i, c, n = F.shape[0], m = Fc.shape[0]
    out = np.full(n, np.inf, dtype=np.float64)
    cdef double[::1] o = out
    cdef double d
    with nogil:
        for c in range(m):
            for i in range(n):
                d = _dist_row(F, i, Fc[c], kind, p)
                if d < o[i]:
                    o[i] = d
    return out


def greedy_farthest(double[:, ::1] F, object center_ok, object cover_ok,
                    int kind, double p, double stop_radius,
                    Py_ssize_t max_centers, Py_ssize_t start=-1):
    cdef Py_ssize_t i, nxt, n = F.shape[0]
    ok_arr = np.ascontiguousarray(np.asarray(center_ok), dtype=np.uint8)
    cov_arr = np.ascontiguousarray(np.asarray(cover_ok), dtype=np.uint8)
    cdef cnp.uint8_t[::1] ok = ok_arr
    cdef cnp.uint8_t[::1] cov = cov_arr
    if n == 0 or not ok_arr.any() or not cov_arr.any():
        return np.empty(0, dtype=np.int64), 0.0
    mind_arr = np.full(n, np.inf, dtype=np.float64)
    cdef double[::1] mind = mind_arr
    centers = []
    cdef double d, achieved, best
    nxt = start
    if nxt < 0:
        for i in range(n):
            if ok[i]:
                nxt = i
                break
    while True:
        centers.append(nxt)
        achieved = 0.0
        with nogil:
            for i in range(n):
                d = _dist_row(F, i, F[nxt], kind, p)
                if d < mind[i]:
                    mind[i] = d
                if cov[i] and mind[i] > achieved:
                    achieved = mind[i]
        if achieved <= stop_radius or len(centers) >= max_centers:
            break
        best = -INFINITY
        nxt = -1
        with nogil:
            for i in range(n):
                if ok[i] and mind[i] > best:
                    best = mind[i]
                    nxt = i
        if nxt < 0 or mind[nxt] <= 0.0:
            break
    achieved = 0.0
    for i in range(n):
        if cov[i] and mind[i] > achieved:
            achieved = mind[i]
    return np.asarray(centers, dtype=np.int64), float(achieved)


def packing_scan(double[:, ::1] F, int kind, double p, double thresh):
    cdef Py_ssize_t i, n = F.shape[0]
    mind_arr = np.full(n, np.inf, dtype=np.float64)
    cdef double[::1] mind = mind_arr
    cdef double d
    kept = []
    for i in range(n):
        if mind[i] > thresh:
            kept.append(i)
            with nogil:
                for_update_range(F, i, kind, p, mind)
    return np.asarray(kept, dtype=np.int64)


cdef inline void for_update_range(const double[:, ::1] F, Py_ssize_t src,
                                  int kind, double p, double[::1] mind) noexcept nogil:
    cdef Py_ssize_t i, n = F.shape[0]
    cdef double d
    for i in range(n):
        d = _dist_row(F, i, F[src], kind, p)
        if d < mind[i]:
            mind[i] = d


def cross_le(double[:, ::1] Fa, double[:, ::1] Fb, int kind, double p,
             double thresh):
    cdef Py_ssize_t i, j, na = Fa.shape[0], nb = Fb.shape[0]
    out = np.empty((na, nb), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] o = out
    with nogil:
        for i in range(na):
            for j in range(nb):
                o[i, j] = _dist_row(Fb, j, Fa[i], kind, p) <= thresh
    return out


def greedy_cover(object cov):
    cov_arr = np.ascontiguousarray(np.asarray(cov), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] c = cov_arr
    cdef Py_ssize_t i, j, nsets = c.shape[0], npts = c.shape[1]
    unc_arr = np.ones(npts, dtype=np.uint8)
    cdef cnp.uint8_t[::1] unc = unc_arr
    cdef Py_ssize_t best, cnt, best_cnt, remaining = npts
    chosen = []
    while remaining > 0:
        best = -1
        best_cnt = 0
        with nogil:
            for i in range(nsets):
                cnt = 0
                for j in range(npts):
                    if unc[j] and c[i, j]:
                        cnt += 1
                if cnt > best_cnt:
                    best_cnt = cnt
                    best = i
        if best < 0:
            break
        chosen.append(best)
        with nogil:
            for j in range(npts):
                if unc[j] and c[best, j]:
                    unc[j] = 0
                    remaining -= 1
    return np.asarray(chosen, dtype=np.int64), int(remaining)
