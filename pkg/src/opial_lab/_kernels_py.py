"""Pure-Python versions of the compiled kernels (same signatures)."""

import math

import numpy as np


def _force(u, p, mu):
    return -mu * math.copysign(abs(u) ** p, u)


def _rk4_step(u, v, h, p, mu):
    k1u = v
    k1v = _force(u, p, mu)
    k2u = v + 0.5 * h * k1v
    k2v = _force(u + 0.5 * h * k1u, p, mu)
    k3u = v + 0.5 * h * k2v
    k3v = _force(u + 0.5 * h * k2u, p, mu)
    k4u = v + h * k3v
    k4v = _force(u + h * k3u, p, mu)
    return (
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def rk4_emden(p, mu, s, length, n):
    h = length / n
    u_out = np.empty(n + 1)
    v_out = np.empty(n + 1)
    u, v = 0.0, float(s)
    u_out[0], v_out[0] = u, v
    for i in range(n):
        u, v = _rk4_step(u, v, h, p, mu)
        u_out[i + 1] = u
        v_out[i + 1] = v
    return u_out, v_out


def rk4_endpoint(p, mu, s, length, n):
    h = length / n
    u, v = 0.0, float(s)
    for _ in range(n):
        u, v = _rk4_step(u, v, h, p, mu)
    return u


def thomas_solve(lower, diag, upper, rhs):
    a = np.asarray(lower, dtype=float)
    b = np.asarray(diag, dtype=float)
    c = np.asarray(upper, dtype=float)
    d = np.asarray(rhs, dtype=float)
    n = b.shape[0]
    if a.shape[0] != n - 1 or c.shape[0] != n - 1 or d.shape[0] != n:
        raise ValueError("inconsistent tridiagonal system dimensions")
    a, b, c, d = a.tolist(), b.tolist(), c.tolist(), d.tolist()
    cp = [0.0] * n
    dp = [0.0] * n
    cp[0] = c[0] / b[0] if n > 1 else 0.0
    dp[0] = d[0] / b[0]
    for i in range(1, n):
        m = b[i] - a[i - 1] * cp[i - 1]
        if i < n - 1:
            cp[i] = c[i] / m
        dp[i] = (d[i] - a[i - 1] * dp[i - 1]) / m
    x = [0.0] * n
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.array(x)
