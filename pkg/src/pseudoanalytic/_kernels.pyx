# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Must stay numerically interchangeable with _kernels_py."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def qmul(const double complex[:, ::1] p, const double complex[:, ::1] q):
    """Row-wise biquaternion product of two (N, 4) arrays."""
    cdef Py_ssize_t n = p.shape[0], k
    if q.shape[0] != n:
        raise ValueError("operand length mismatch")
    out = np.empty((n, 4), dtype=np.complex128)
    cdef double complex[:, ::1] r = out
    cdef double complex p0, p1, p2, p3, q0, q1, q2, q3
    with nogil:
        for k in range(n):
            p0 = p[k, 0]; p1 = p[k, 1]; p2 = p[k, 2]; p3 = p[k, 3]
            q0 = q[k, 0]; q1 = q[k, 1]; q2 = q[k, 2]; q3 = q[k, 3]
            r[k, 0] = p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3
            r[k, 1] = p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2
            r[k, 2] = p0 * q2 + p2 * q0 + p3 * q1 - p1 * q3
            r[k, 3] = p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1
    return out


def cumsimpson(const double[::1] y, double h):
    """Cumulative composite Simpson integral from the first node."""
    cdef Py_ssize_t n = y.shape[0], i
    if n < 3:
        raise ValueError("need at least 3 samples")
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] s = out
    cdef double third = h / 3.0, twelfth = h / 12.0
    with nogil:
        for i in range(1, n):
            if i % 2 == 0:
                s[i] = s[i - 2] + third * (y[i - 2] + 4.0 * y[i - 1] + y[i])
            elif i + 1 < n:
                s[i] = s[i - 1] + twelfth * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1])
            else:
                s[i] = s[i - 1] + twelfth * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i])
    return out
