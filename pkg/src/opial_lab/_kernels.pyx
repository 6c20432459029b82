# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: RK4 for the Emden-Fowler IVP and the Thomas solve."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, copysign

cnp.import_array()


cdef inline double _force(double u, double p, double mu) noexcept nogil:
    return -mu * copysign(pow(fabs(u), p), u)


def rk4_emden(double p, double mu, double s, double length, Py_ssize_t n):
    """Integrate u'' = -mu |u|^(p-1) u, u(0)=0, u'(0)=s on n uniform steps.

    Returns the arrays (u, u') at the n + 1 nodes.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_arr = np.empty(n + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.empty(n + 1)
    cdef double[::1] u_out = u_arr
    cdef double[::1] v_out = v_arr
    cdef double h = length / n
    cdef double u = 0.0, v = s
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v
    cdef Py_ssize_t i
    with nogil:
        u_out[0] = u
        v_out[0] = v
        for i in range(n):
            k1u = v
            k1v = _force(u, p, mu)
            k2u = v + 0.5 * h * k1v
            k2v = _force(u + 0.5 * h * k1u, p, mu)
            k3u = v + 0.5 * h * k2v
            k3v = _force(u + 0.5 * h * k2u, p, mu)
            k4u = v + h * k3v
            k4v = _force(u + h * k3u, p, mu)
            u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            u_out[i + 1] = u
            v_out[i + 1] = v
    return u_arr, v_arr


def rk4_endpoint(double p, double mu, double s, double length, Py_ssize_t n):
    """Value u(L) of the same integration, without storing the trajectory."""
    cdef double h = length / n
    cdef double u = 0.0, v = s
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            k1u = v
            k1v = _force(u, p, mu)
            k2u = v + 0.5 * h * k1v
            k2v = _force(u + 0.5 * h * k1u, p, mu)
            k3u = v + 0.5 * h * k2v
            k3v = _force(u + 0.5 * h * k2u, p, mu)
            k4u = v + h * k3v
            k4v = _force(u + h * k3u, p, mu)
            u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return u


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system; lower/upper have one entry fewer than diag."""
    cdef double[::1] a = np.ascontiguousarray(lower, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(upper, dtype=np.float64)
    cdef double[::1] d = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef Py_ssize_t n = b.shape[0]
    if a.shape[0] != n - 1 or c.shape[0] != n - 1 or d.shape[0] != n:
        raise ValueError("inconsistent tridiagonal system dimensions")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.empty(n)
    cdef double[::1] x = x_arr
    cdef double[::1] cp = np.empty(n)
    cdef double[::1] dp = np.empty(n)
    cdef double m
    cdef Py_ssize_t i
    with nogil:
        cp[0] = c[0] / b[0] if n > 1 else 0.0
        dp[0] = d[0] / b[0]
        for i in range(1, n):
            m = b[i] - a[i - 1] * cp[i - 1]
            if i < n - 1:
                cp[i] = c[i] / m
            dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / m
        x[n - 1] = dp[n - 1]
        for i in range(n - 2, -1, -1):
            x[i] = dp[i] - cp[i] * x[i + 1]
    return x_arr
