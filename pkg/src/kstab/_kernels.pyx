# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float volume kernel: one Zariski decomposition per point, in C loops."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double TOL = 1e-10


cdef int _solve_negdef(double[:, ::1] A, double[::1] rhs, int k, double[:, ::1] work, double[::1] out) noexcept nogil:
    """Solve A x = rhs for a negative definite k x k system; 0 if not negative definite."""
    cdef int i, j, r
    cdef double piv, f
    for i in range(k):
        for j in range(k):
            work[i, j] = A[i, j]
        work[i, k] = rhs[i]
    for i in range(k):
        piv = work[i, i]
        if piv >= -TOL:
            return 0
        for r in range(i + 1, k):
            f = work[r, i] / piv
            if f != 0.0:
                for j in range(i, k + 1):
                    work[r, j] -= f * work[i, j]
    for i in range(k - 1, -1, -1):
        f = work[i, k]
        for j in range(i + 1, k):
            f -= work[i, j] * out[j]
        out[i] = f / work[i, i]
    return 1


def grid_volumes(gram, curves, extra, points):
    cdef double[:, ::1] G = np.ascontiguousarray(gram, dtype=np.float64)
    cdef int n = G.shape[0]
    cdef double[:, ::1] C = np.ascontiguousarray(np.asarray(curves, dtype=np.float64).reshape(-1, n))
    cdef double[:, ::1] X = np.ascontiguousarray(np.asarray(extra, dtype=np.float64).reshape(-1, n))
    cdef double[:, ::1] D = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))
    cdef int m = C.shape[0], nx = X.shape[0], npts = D.shape[0]
    cdef double[:, ::1] gc = np.ascontiguousarray(np.asarray(C) @ np.asarray(G))
    cdef double[:, ::1] cc = np.ascontiguousarray(np.asarray(gc) @ np.asarray(C).T)
    cdef double[:, ::1] xg = np.ascontiguousarray(np.asarray(X) @ np.asarray(G))
    cdef double[::1] vol = np.zeros(npts)
    cdef double[::1] b = np.zeros(m)
    cdef double[::1] pc = np.zeros(m)
    cdef double[::1] a = np.zeros(m)
    cdef double[::1] P = np.zeros(n)
    cdef double[::1] rhs = np.zeros(m)
    cdef double[:, ::1] sub = np.zeros((m, m))
    cdef double[:, ::1] work = np.zeros((m, m + 1))
    cdef int[::1] sup = np.zeros(m, dtype=np.intc)
    cdef int[::1] inS = np.zeros(m, dtype=np.intc)
    cdef int p, i, j, k, it, ok, grew
    cdef double s, v
    with nogil:
        for p in range(npts):
            for i in range(m):
                s = 0.0
                for j in range(n):
                    s += gc[i, j] * D[p, j]
                b[i] = s
                inS[i] = 1 if s < -TOL else 0
            ok = 1
            for it in range(m + 1):
                k = 0
                for i in range(m):
                    if inS[i]:
                        sup[k] = i
                        k += 1
                for i in range(k):
                    rhs[i] = b[sup[i]]
                    for j in range(k):
                        sub[i, j] = cc[sup[i], sup[j]]
                if k > 0:
                    if not _solve_negdef(sub, rhs, k, work, a):
                        ok = 0
                        break
                    for i in range(k):
                        if a[i] < -TOL:
                            ok = 0
                    if not ok:
                        break
                grew = 0
                for j in range(m):
                    s = b[j]
                    for i in range(k):
                        s -= a[i] * cc[sup[i], j]
                    pc[j] = s
                    if not inS[j] and s < -TOL:
                        inS[j] = 1
                        grew = 1
                if not grew:
                    break
            if not ok:
                vol[p] = 0.0
                continue
            for j in range(n):
                s = D[p, j]
                for i in range(k):
                    s -= a[i] * C[sup[i], j]
                P[j] = s
            for i in range(nx):
                s = 0.0
                for j in range(n):
                    s += xg[i, j] * P[j]
                if s < -TOL:
                    ok = 0
            if not ok:
                vol[p] = 0.0
                continue
            v = 0.0
            for i in range(n):
                for j in range(n):
                    v += P[i] * G[i, j] * P[j]
            vol[p] = v if v > 0.0 else 0.0
    return np.asarray(vol)
