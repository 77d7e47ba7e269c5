# cython: language_level=3
"""Compiled hot loops: Gauss-sum exponent counting and Z[x]/(x^n - 1) arithmetic."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def gauss_counts(long long a, long long b, long long s, long long n):
    cdef cnp.ndarray[i64, ndim=1] out = np.zeros(n, dtype=np.int64)
    cdef long long j, e, aa, bb
    aa = ((a * s) % n + n) % n
    bb = ((b * s) % n + n) % n
    for j in range(n):
        e = ((aa * j) % n * j + bb * j) % n
        out[e] += 1
    return out


def cyclic_mul(cnp.ndarray[i64, ndim=1] x, cnp.ndarray[i64, ndim=1] y):
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[i64, ndim=1] out = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t i, j, k
    cdef i64 xi
    for i in range(n):
        xi = x[i]
        if xi == 0:
            continue
        k = i
        for j in range(n):
            out[k] += xi * y[j]
            k += 1
            if k == n:
                k = 0
    return out


def cyclo_rem(cnp.ndarray[i64, ndim=1] x, cnp.ndarray[i64, ndim=1] phi):
    """Remainder of x (low degree first) modulo the monic polynomial phi."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = phi.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] w = x.copy()
    cdef Py_ssize_t i, t
    cdef i64 c
    for i in range(n - 1, m - 1, -1):
        c = w[i]
        if c == 0:
            continue
        w[i] = 0
        for t in range(m):
            if phi[t] != 0:
                w[i - m + t] -= c * phi[t]
    if n < m:
        out = np.zeros(m, dtype=np.int64)
        out[:n] = w
        return out
    return w[:m].copy()
