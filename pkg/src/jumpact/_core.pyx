# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels. Same API as ``jumpact._core_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


cdef inline double _kernel(double x) nogil:
    cdef double a = fabs(x)
    cdef double t
    if a <= 1.0:
        return 1.0
    if a >= 2.0:
        return 0.0
    t = 1.0 / (2.0 - a) - 1.0 / (a - 1.0)
    if t > 700.0:
        return 0.0
    return 1.0 / (1.0 + exp(t))


def kernel_values(x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = xs.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] xv = xs
    with nogil:
        for i in range(n):
            o[i] = _kernel(xv[i])
    return out.reshape(np.shape(x))


def smoothed_counts(values, taus, int m):
    cdef double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(np.atleast_1d(taus), dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    if n < 2 * m + 2:
        raise ValueError(f"need at least {2 * m + 2} observations for m={m}, got {n}")
    cdef Py_ssize_t nt = tv.shape[0]
    cdef Py_ssize_t width = n - 2 * m
    cdef Py_ssize_t j, k, t
    cdef double acc
    sym_arr = np.empty(n - 2, dtype=np.float64)
    cdef double[::1] sym = sym_arr
    out = np.zeros((nt, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for j in range(n - 2):
            sym[j] = (v[j + 2] - v[j + 1]) - (v[j + 1] - v[j])
        for j in range(width):
            acc = 0.0
            for k in range(m):
                if k == 0:
                    acc = sym[j]
                else:
                    acc = acc + sym[j + 2 * k]
                for t in range(nt):
                    o[t, k] += 1.0 - _kernel(tv[t] * acc)
    return out


def threshold_counts(values, taus):
    cdef double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(np.atleast_1d(taus), dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    if n < 2:
        raise ValueError("need at least 2 observations")
    cdef Py_ssize_t nt = tv.shape[0]
    cdef Py_ssize_t j, t
    cdef double a
    out = np.zeros(nt, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for j in range(n - 1):
            a = fabs(v[j + 1] - v[j])
            for t in range(nt):
                if tv[t] * a >= 1.0:
                    o[t] += 1
    return out
