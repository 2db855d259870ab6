# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled MNA kernels; same contract as ``_mna_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from numpy.linalg import LinAlgError

cnp.import_array()

cdef double PIVOT_RTOL = 1e-14


def stamp(Py_ssize_t n_nodes,
          const cnp.intp_t[::1] g_a, const cnp.intp_t[::1] g_b, const double[::1] g_val,
          const cnp.intp_t[::1] i_a, const cnp.intp_t[::1] i_b, const double[::1] i_val,
          const cnp.intp_t[::1] v_a, const cnp.intp_t[::1] v_b, const double[::1] v_val):
    cdef Py_ssize_t nn = n_nodes - 1
    cdef Py_ssize_t nv = v_a.shape[0]
    cdef Py_ssize_t dim = nn + nv
    cdef cnp.ndarray[double, ndim=2] A_arr = np.zeros((dim, dim))
    cdef cnp.ndarray[double, ndim=1] r_arr = np.zeros(dim)
    cdef double[:, ::1] A = A_arr
    cdef double[::1] rhs = r_arr
    cdef Py_ssize_t k, a, b, row
    cdef double g
    for k in range(g_a.shape[0]):
        a = g_a[k] - 1
        b = g_b[k] - 1
        g = g_val[k]
        if a >= 0:
            A[a, a] += g
        if b >= 0:
            A[b, b] += g
        if a >= 0 and b >= 0:
            A[a, b] -= g
            A[b, a] -= g
    for k in range(i_a.shape[0]):
        a = i_a[k] - 1
        b = i_b[k] - 1
        if a >= 0:
            rhs[a] -= i_val[k]
        if b >= 0:
            rhs[b] += i_val[k]
    for k in range(nv):
        row = nn + k
        a = v_a[k] - 1
        b = v_b[k] - 1
        if a >= 0:
            A[a, row] += 1.0
            A[row, a] += 1.0
        if b >= 0:
            A[b, row] -= 1.0
            A[row, b] -= 1.0
        rhs[row] = v_val[k]
    return A_arr, r_arr


def lu_solve(A_in, b_in):
    cdef cnp.ndarray[double, ndim=2] M_arr = np.array(A_in, dtype=np.float64, order="C")
    cdef cnp.ndarray[double, ndim=1] x_arr = np.array(b_in, dtype=np.float64)
    cdef double[:, ::1] M = M_arr
    cdef double[::1] x = x_arr
    cdef Py_ssize_t n = M.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double amax = 0.0, v, f, tol, s
    for i in range(n):
        for j in range(n):
            v = fabs(M[i, j])
            if v > amax:
                amax = v
    tol = PIVOT_RTOL * amax
    for k in range(n):
        p = k
        v = fabs(M[k, k])
        for i in range(k + 1, n):
            if fabs(M[i, k]) > v:
                v = fabs(M[i, k])
                p = i
        if not v > tol:
            raise LinAlgError(f"singular matrix at pivot {k}")
        if p != k:
            for j in range(k, n):
                s = M[k, j]
                M[k, j] = M[p, j]
                M[p, j] = s
            s = x[k]
            x[k] = x[p]
            x[p] = s
        for i in range(k + 1, n):
            f = M[i, k] / M[k, k]
            if f != 0.0:
                for j in range(k, n):
                    M[i, j] -= f * M[k, j]
                x[i] -= f * x[k]
    for k in range(n - 1, -1, -1):
        s = x[k]
        for j in range(k + 1, n):
            s -= M[k, j] * x[j]
        x[k] = s / M[k, k]
    return x_arr
