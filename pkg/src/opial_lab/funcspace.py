"""Trial functions on [0, L] and the functionals evaluated on them.

Two representations are provided.  :class:`SineSeries` is a finite
Fourier-sine expansion, for which ``int u^2`` and ``int (u')^2`` are exact
through Parseval.  :class:`GridFunction` holds samples on a uniform grid and
is what the ODE solvers and the maximizer produce.

Functionals involving absolute values (``int |u u'|``, ``int |u|^(p+1)``)
have no closed form for a general series.  They are integrated with
composite Gauss-Legendre rules on the sub-intervals between the sign
changes of the integrand, doubling the panel count until the relative
change drops below 1e-10.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import AccuracyError, QuadratureResult
from .specfun import DomainError

__all__ = [
    "SineSeries",
    "GridFunction",
    "evaluate",
    "norm_l2_sq",
    "dirichlet_energy",
    "opial_functional",
    "lp1_functional",
    "mean",
    "sup_norm",
    "sample_random",
    "project_mean_zero",
    "REL_CHANGE_TOL",
]

REL_CHANGE_TOL = 1e-10
_MAX_PANELS = 2**12
_PANEL_ORDER = 20
_PANEL_NODES, _PANEL_WEIGHTS = np.polynomial.legendre.leggauss(_PANEL_ORDER)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SineSeries:
    """``u(x) = sum_k a_k sin(k pi x / L)``, k = 1..K."""

    length: float
    coefficients: np.ndarray

    def __post_init__(self):
        length = float(self.length)
        if not (math.isfinite(length) and length > 0):
            raise DomainError(f"length must be positive, got {self.length!r}")
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "coefficients", _frozen(coeffs))

    @property
    def modes(self):
        return np.arange(1, self.coefficients.size + 1)

    @property
    def wavenumbers(self):
        return self.modes * math.pi / self.length

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.sin(np.multiply.outer(x, self.wavenumbers)) @ self.coefficients

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        k = self.wavenumbers
        return np.cos(np.multiply.outer(x, k)) @ (self.coefficients * k)

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float)
        k = self.wavenumbers
        return -(np.sin(np.multiply.outer(x, k)) @ (self.coefficients * k * k))

    def scaled(self, factor):
        return SineSeries(self.length, factor * self.coefficients)

    def is_zero(self):
        return not np.any(self.coefficients)

    def to_grid(self, n):
        """Sample at ``n + 1`` uniform nodes (endpoints set to exactly 0)."""
        x = np.linspace(0.0, self.length, n + 1)
        values = self(x)
        values[0] = values[-1] = 0.0
        return GridFunction(self.length, values)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values ``v_0..v_N`` at the nodes ``x_i = i L / N``."""

    length: float
    values: np.ndarray

    def __post_init__(self):
        length = float(self.length)
        if not (math.isfinite(length) and length > 0):
            raise DomainError(f"length must be positive, got {self.length!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 3:
            raise DomainError("a grid function needs at least 3 nodes (N >= 2)")
        if not np.all(np.isfinite(values)):
            raise DomainError("grid values must be finite")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_function(cls, f, length, n):
        x = np.linspace(0.0, length, n + 1)
        return cls(length, np.asarray(f(x), dtype=float) * np.ones_like(x))

    @property
    def n(self):
        return self.values.size - 1

    @property
    def step(self):
        return self.length / self.n

    @property
    def nodes(self):
        return np.linspace(0.0, self.length, self.n + 1)

    def derivative(self):
        # central differences inside, second-order one-sided at the ends
        return np.gradient(self.values, self.step, edge_order=2)

    def integrate(self, samples):
        return float(np.trapezoid(samples, dx=self.step))

    def scaled(self, factor):
        return GridFunction(self.length, factor * self.values)

    def is_zero(self):
        return not np.any(self.values)

    def to_csv(self, fh=None):
        """Write ``x,u`` rows with a one-line header; returns the text if no file given."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["x", "u"])
        for x, v in zip(self.nodes, self.values):
            writer.writerow([f"{x:.17g}", f"{v:.17g}"])
        if fh is None:
            return out.getvalue()
        return None

    @classmethod
    def from_csv(cls, fh):
        rows = list(csv.reader(fh))
        if rows[0] != ["x", "u"]:
            raise ValueError("expected header x,u")
        data = np.array(rows[1:], dtype=float)
        return cls(float(data[-1, 0]), data[:, 1])


def _sign_change_points(g, length, samples):
    """Roots of ``g`` on (0, L), located by sampling and vectorised bisection."""
    x = np.linspace(0.0, length, samples + 1)
    y = g(x)
    exact = x[1:-1][y[1:-1] == 0.0]
    idx = np.nonzero(y[:-1] * y[1:] < 0.0)[0]
    lo, hi = x[idx], x[idx + 1]
    glo = y[idx]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
    return np.concatenate((exact, 0.5 * (lo + hi)))


def _piecewise_gauss(integrand, breaks, tol=REL_CHANGE_TOL, max_panels=_MAX_PANELS):
    """Composite Gauss-Legendre over consecutive break intervals, doubling panels."""
    breaks = np.unique(breaks)
    lo, hi = breaks[:-1], breaks[1:]
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    previous = None
    panels = 1
    evaluations = 0
    while True:
        edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, panels + 1)
        a, b = edges[:, :-1], edges[:, 1:]
        half = 0.5 * (b - a)
        x = (0.5 * (a + b))[..., None] + half[..., None] * _PANEL_NODES
        vals = integrand(x)
        evaluations += vals.size
        value = float(np.sum(half * (vals @ _PANEL_WEIGHTS)))
        # cancellation floor for integrals that are zero up to rounding
        floor = 64.0 * np.finfo(float).eps * float(np.sum(half * (np.abs(vals) @ _PANEL_WEIGHTS)))
        if previous is not None:
            change = abs(value - previous)
            if change <= max(tol * abs(value), floor):
                return QuadratureResult(value, change, evaluations)
        if panels >= max_panels:
            raise AccuracyError(
                "composite quadrature did not settle within the panel budget",
                QuadratureResult(value, abs(value - previous), evaluations),
            )
        previous = value
        panels *= 2


def _series_integral(u, integrand, root_functions=()):
    samples = max(256, 32 * u.coefficients.size)
    breaks = [np.array([0.0, u.length])]
    breaks += [_sign_change_points(g, u.length, samples) for g in root_functions]
    return _piecewise_gauss(integrand, np.concatenate(breaks)).value


def evaluate(u, x):
    """Value of a :class:`SineSeries` at ``x`` in ``[0, L]``."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or np.any(x_arr > u.length) or not np.all(np.isfinite(x_arr)):
        raise DomainError(f"x must lie in [0, {u.length}]")
    value = u(x_arr)
    # sin(k pi) is not exactly zero in floating point
    value = np.where((x_arr == 0.0) | (x_arr == u.length), 0.0, value)
    return float(value) if value.ndim == 0 else value


def norm_l2_sq(u):
    """``int_0^L u^2 dx``; exact Parseval value for a series."""
    if isinstance(u, SineSeries):
        return 0.5 * u.length * float(np.dot(u.coefficients, u.coefficients))
    return u.integrate(u.values**2)


def dirichlet_energy(u):
    """``int_0^L (u')^2 dx``; exact Parseval value for a series."""
    if isinstance(u, SineSeries):
        ka = u.modes * u.coefficients
        return math.pi**2 / (2.0 * u.length) * float(np.dot(ka, ka))
    return u.integrate(u.derivative() ** 2)


def opial_functional(u):
    """Mixed energy ``int_0^L |u u'| dx``."""
    if isinstance(u, SineSeries):
        if u.is_zero():
            return 0.0
        return _series_integral(
            u, lambda x: np.abs(u(x) * u.derivative(x)), (u, u.derivative)
        )
    return u.integrate(np.abs(u.values * u.derivative()))


def weighted_opial_functional(u):
    """``int_0^L (L - t) |u(t) u'(t)| dt``, the Fubini-swapped double integral."""
    L = u.length
    if isinstance(u, SineSeries):
        if u.is_zero():
            return 0.0
        return _series_integral(
            u, lambda x: (L - x) * np.abs(u(x) * u.derivative(x)), (u, u.derivative)
        )
    return u.integrate((L - u.nodes) * np.abs(u.values * u.derivative()))


def lp1_functional(u, p):
    """``int_0^L |u|^(p+1) dx`` for ``p >= 1``."""
    p = float(p)
    if not (math.isfinite(p) and p >= 1.0):
        raise DomainError(f"p must satisfy p >= 1, got {p!r}")
    if isinstance(u, SineSeries):
        if u.is_zero():
            return 0.0
        return _series_integral(u, lambda x: np.abs(u(x)) ** (p + 1.0), (u,))
    return u.integrate(np.abs(u.values) ** (p + 1.0))


def mean(u):
    """``(1/L) int_0^L u dx``."""
    if isinstance(u, SineSeries):
        return _series_integral(u, u) / u.length
    return u.integrate(u.values) / u.length


def sup_norm(u, samples=None):
    """``max |u|``; for a series, the maximum over a dense sample plus refinement."""
    if isinstance(u, GridFunction):
        return float(np.max(np.abs(u.values)))
    if u.is_zero():
        return 0.0
    n = samples or max(1024, 64 * u.coefficients.size)
    x = np.linspace(0.0, u.length, n + 1)
    crit = _sign_change_points(u.derivative, u.length, n)
    return float(max(np.max(np.abs(u(x))), np.max(np.abs(u(crit)), initial=0.0)))


def sample_random(K, decay=0.0, seed=0, length=1.0):
    """Random series with ``a_k ~ U[-1, 1] * k^(-decay)``, reproducible from ``seed``.

    ``seed`` may be an int or a sequence of ints (passed to
    :func:`numpy.random.default_rng`), which lets corpora be partitioned
    per sample.
    """
    if K < 1:
        raise DomainError("K must be at least 1")
    if decay < 0:
        raise DomainError("decay must be non-negative")
    rng = np.random.default_rng(seed)
    k = np.arange(1, K + 1, dtype=float)
    return SineSeries(length, rng.uniform(-1.0, 1.0, K) * k ** (-float(decay)))


def mean_weights(K):
    """Mean of each sine mode: ``(1 - (-1)^k) / (k pi)``."""
    k = np.arange(1, K + 1)
    return (1.0 - (-1.0) ** k) / (k * math.pi)


def project_mean_zero(u):
    """Orthogonal projection of the coefficient vector onto the zero-mean hyperplane."""
    c = mean_weights(u.coefficients.size)
    a = u.coefficients - (np.dot(c, u.coefficients) / np.dot(c, c)) * c
    return SineSeries(u.length, a)
