"""Positive ground states of ``-u'' = mu u^p`` on (0, L) with ``u(0) = u(L) = 0``.

Two independent constructions:

* :func:`profile_from_first_integral` inverts the first integral
  ``(u')^2 / 2 = mu/(p+1) (A^(p+1) - u^(p+1))`` node by node;
* :func:`shoot` integrates the initial value problem with RK4 and adjusts
  the initial slope until the first return to zero lands on ``x = L``.

The scale-invariant relation between the multiplier and the amplitude
``A = max u`` follows from the half-length integral::

    mu * A^(p-1) = 2 (p+1) I0(p)^2 / L^2
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import kernels, reporting
from .funcspace import GridFunction
from .quadrature import AccuracyError, QuadratureResult, i0
from .specfun import DomainError

__all__ = [
    "ExtremalProfile",
    "SolverError",
    "mu_amplitude_product",
    "amplitude_for",
    "half_length",
    "profile_from_first_integral",
    "shoot",
    "energy_identity_residual",
    "DEFAULT_STEPS",
]

DEFAULT_STEPS = 4000
_LINEAR_MATCH_TOL = 1e-6
_INVERSION_ORDER = 64
_INV_NODES, _INV_WEIGHTS = np.polynomial.legendre.leggauss(_INVERSION_ORDER)


class SolverError(RuntimeError):
    """The boundary value solver could not produce an admissible profile."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


def _exponent(p):
    p = float(p)
    if not (math.isfinite(p) and p >= 1.0):
        raise DomainError(f"p must satisfy p >= 1, got {p!r}")
    return p


@dataclass(frozen=True, eq=False)
class ExtremalProfile:
    p: float
    length: float
    mu: float
    amplitude: float
    profile: GridFunction
    slope: np.ndarray = field(repr=False)
    method: str = "shoot"
    energy: float = field(init=False)
    nonlinear_mass: float = field(init=False)
    ode_residual: float = field(init=False)
    energy_identity_residual: float = field(init=False)
    boundary_residual: float = field(init=False)

    def __post_init__(self):
        u = self.profile.values
        if np.min(u) < -1e-9 * self.amplitude:
            raise DomainError("extremal profile must be non-negative")
        slope = np.asarray(self.slope, dtype=float)
        slope.setflags(write=False)
        object.__setattr__(self, "slope", slope)
        h = self.profile.step
        q = self.p + 1.0
        # u' is carried exactly by both constructions, so E avoids a
        # finite-difference derivative
        energy = float(np.trapezoid(slope**2, dx=h))
        mass = float(np.trapezoid(np.abs(u) ** q, dx=h))
        if not energy > 0:
            raise DomainError("extremal profile has zero energy")
        forcing = self.mu * np.abs(u[1:-1]) ** self.p
        second = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2
        ode = float(np.max(np.abs(second + forcing)) / np.max(forcing))
        object.__setattr__(self, "energy", energy)
        object.__setattr__(self, "nonlinear_mass", mass)
        object.__setattr__(self, "ode_residual", ode)
        object.__setattr__(
            self,
            "energy_identity_residual",
            float(abs(energy - self.mu * mass) / max(energy, self.mu * mass)),
        )
        object.__setattr__(
            self, "boundary_residual", float(max(abs(u[0]), abs(u[-1])) / self.amplitude)
        )

    @property
    def residuals(self):
        return (self.ode_residual, self.energy_identity_residual, self.boundary_residual)

    def sidecar(self):
        return {
            "p": self.p,
            "L": self.length,
            "mu": self.mu,
            "A": self.amplitude,
            "E": self.energy,
            "F": self.nonlinear_mass,
            "method": self.method,
            "n": self.profile.n,
            "ode_residual": self.ode_residual,
            "energy_identity_residual": self.energy_identity_residual,
            "boundary_residual": self.boundary_residual,
        }

    def write(self, csv_path, json_path):
        with open(csv_path, "w", newline="") as fh:
            self.profile.to_csv(fh)
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(reporting.dumps(reporting.with_version(self.sidecar())))


def mu_amplitude_product(p, L):
    """``mu * A^(p-1) = 2 (p+1) I0(p)^2 / L^2``; equals ``pi^2/L^2`` at p = 1."""
    p = _exponent(p)
    L = _positive("L", L)
    return 2.0 * (p + 1.0) * i0(p) ** 2 / L**2


def amplitude_for(p, mu, L):
    """Amplitude of the ground state with multiplier ``mu`` on (0, L), for p > 1."""
    p = _exponent(p)
    if p == 1.0:
        raise DomainError("the amplitude is free in the linear case p = 1")
    return (mu_amplitude_product(p, L) / _positive("mu", mu)) ** (1.0 / (p - 1.0))


def half_length(p, mu, A):
    """Interval length ``L`` consistent with ``(p, mu, A)``.

    Twice the length of the increasing branch,
    ``L/2 = sqrt((p+1)/(2 mu)) A^(-(p-1)/2) I0(p)``.
    """
    p = _exponent(p)
    mu = _positive("mu", mu)
    A = _positive("A", A)
    return 2.0 * math.sqrt((p + 1.0) / (2.0 * mu)) * A ** (-0.5 * (p - 1.0)) * i0(p)


def _branch_integrand(w, q):
    # int_s^1 dt / sqrt(1 - t^q) with t = 1 - w^2 becomes int_0^w of this
    w2 = w * w
    with np.errstate(invalid="ignore", divide="ignore"):
        gap = -np.expm1(q * np.log1p(-w2))
        g = 2.0 * w / np.sqrt(gap)
    return np.where(w2 < 1e-300, 2.0 / math.sqrt(q), g)


def _branch_integral(w, q):
    half = 0.5 * w
    x = half[:, None] * (1.0 + _INV_NODES)
    return half * (_branch_integrand(x, q) @ _INV_WEIGHTS)


def _invert_branch(target, q, max_iter=100):
    """Solve ``int_0^w g = target`` for w in [0, 1] (safeguarded Newton, vectorised)."""
    total = float(_branch_integral(np.array([1.0]), q)[0])
    lo = np.zeros_like(target)
    hi = np.ones_like(target)
    w = np.clip(target / total, 0.0, 1.0)
    for _ in range(max_iter):
        f = _branch_integral(w, q) - target
        lo = np.where(f < 0, w, lo)
        hi = np.where(f > 0, w, hi)
        step = f / _branch_integrand(w, q)
        w_new = w - step
        outside = (w_new <= lo) | (w_new >= hi)
        w_new = np.where(outside, 0.5 * (lo + hi), w_new)
        done = np.max(np.abs(w_new - w)) <= 4e-16
        w = w_new
        if done:
            return w
    raise AccuracyError(
        "first-integral inversion did not converge",
        QuadratureResult(float(np.max(np.abs(f))), float(np.max(np.abs(f))), max_iter),
    )


def profile_from_first_integral(p, L, A, n=DEFAULT_STEPS):
    """Ground state with amplitude ``A`` on (0, L), reconstructed from the first integral.

    The multiplier is fixed by :func:`mu_amplitude_product`.  Each node's
    distance from the midpoint is matched to the branch integral
    ``sqrt((p+1)/(2 mu)) int_u^A dv / sqrt(A^(p+1) - v^(p+1))`` and the
    profile is mirrored about ``L/2``.
    """
    p = _exponent(p)
    L = _positive("L", L)
    A = _positive("A", A)
    if n < 16:
        raise DomainError("n must be at least 16")
    q = p + 1.0
    mu = mu_amplitude_product(p, L) / A ** (p - 1.0)
    x = np.linspace(0.0, L, n + 1)
    dist = np.abs(0.5 * L - x)
    target = i0(p) * (2.0 * dist / L)
    w = _invert_branch(target, q)
    s = 1.0 - w * w
    u = A * s
    u[0] = u[-1] = 0.0
    # u' from the first integral, positive on the rising half
    with np.errstate(divide="ignore"):
        gap = -np.expm1(q * np.log1p(-w * w))
    speed = math.sqrt(2.0 * mu / q) * A ** (0.5 * q) * np.sqrt(np.clip(gap, 0.0, None))
    slope = np.sign(0.5 * L - x) * speed
    return ExtremalProfile(p, L, mu, A, GridFunction(L, u), slope, method="quadrature")


def _linear_profile(mu, L, n):
    k = math.sqrt(mu)
    if abs(k * L / math.pi - 1.0) > _LINEAR_MATCH_TOL:
        raise SolverError(
            "for p = 1 a positive solution exists only at mu = pi^2 / L^2",
            {"mu": mu, "pi2_over_L2": math.pi**2 / L**2},
        )
    # integrate the exact eigenvalue pi^2/L^2 so u(L) = 0 even when mu is
    # only within the match tolerance; s = pi/L normalises the amplitude to 1
    k = math.pi / L
    return kernels.rk4_emden(1.0, k * k, k, L, n), k


def shoot(p, mu, L, tol=1e-10, n=DEFAULT_STEPS):
    """Ground state of ``-u'' = mu u^p`` by RK4 shooting on the initial slope.

    The slope is bracketed by geometric scanning around the value predicted
    by the scaling law, then refined with Brent's method on ``u(L)``.  Only
    the first root is accepted: the profile must stay positive inside and
    have a single maximum.
    """
    p = _exponent(p)
    mu = _positive("mu", mu)
    L = _positive("L", L)
    if n < 16:
        raise DomainError("n must be at least 16")

    if p == 1.0:
        (u, v), s = _linear_profile(mu, L, n)
    else:
        A_guess = amplitude_for(p, mu, L)
        s_guess = math.pi * A_guess / L

        def endpoint(s):
            return kernels.rk4_endpoint(p, mu, s, L, n)

        ratio = 1.5
        lo = hi = s_guess
        f_hi = endpoint(hi)
        if f_hi > 0:
            while f_hi > 0:
                lo, hi = hi, hi * ratio
                if hi > 1e6 * s_guess:
                    raise SolverError("no bracket for the initial slope",
                                      {"s_guess": s_guess, "s_max": hi})
                f_hi = endpoint(hi)
        else:
            f_lo = f_hi
            while not f_lo > 0:
                hi, lo = lo, lo / ratio
                if lo < 1e-3 * s_guess:
                    raise SolverError("no bracket for the initial slope",
                                      {"s_guess": s_guess, "s_min": lo})
                f_lo = endpoint(lo)
        if not math.isfinite(endpoint(hi)):
            raise SolverError("integration overflowed inside the bracket",
                              {"bracket": (lo, hi)})
        s = brentq(endpoint, lo, hi, xtol=1e-15 * s_guess, rtol=4 * np.finfo(float).eps,
                   maxiter=500)
        u, v = kernels.rk4_emden(p, mu, s, L, n)

    peak = float(np.max(u))
    if abs(u[-1]) > tol * peak:
        raise SolverError("boundary condition at x = L not met",
                          {"u_L": float(u[-1]), "max_u": peak, "slope": s})
    interior = u[1:-1]
    rises = np.diff(u) > 0
    if np.any(interior <= 0) or np.count_nonzero(rises[1:] != rises[:-1]) != 1:
        raise SolverError("shooting converged to a non-ground-state profile",
                          {"slope": s})
    # the exact solution attains A = max u; the conserved first integral
    # gives it independently of the grid
    q = p + 1.0
    A = 1.0 if p == 1.0 else (q * s * s / (2.0 * mu)) ** (1.0 / q)
    profile = GridFunction(L, np.where(np.abs(u) <= tol * peak, np.abs(u), u))
    return ExtremalProfile(p, L, mu, A, profile, v, method="shoot")


def energy_identity_residual(profile):
    """``|E - mu F| / max(E, mu F)`` for a solved profile."""
    return profile.energy_identity_residual
