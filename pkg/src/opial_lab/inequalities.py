"""Evaluators for the Wirtinger / Olech-Opial family of inequalities.

Every check returns a :class:`CheckReport`.  A report ``holds`` when
``lhs <= rhs + 1e-9 * max(1, |rhs|)``, so inequalities that are tight at
their extremals do not flip because of rounding.  For the zero function the
``ratio`` field is 0 by convention.
"""

import math
from dataclasses import dataclass, field

from . import funcspace as fs
from .specfun import DomainError

__all__ = [
    "CheckReport",
    "PreconditionError",
    "SLACK",
    "wirtinger_check",
    "opial_check",
    "identity_residual",
    "chain_check",
    "interpolation_check",
    "energy_lower_bound",
    "mean_zero_check",
    "mean_zero_energy_bound",
    "dirichlet_threshold",
    "mean_zero_threshold",
]

SLACK = 1e-9
REPORT_KEYS = ("name", "lhs", "rhs", "constant", "ratio", "holds", "margin")


class PreconditionError(DomainError):
    """Input does not satisfy the hypotheses of the inequality being checked."""


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    constant: float
    ratio: float
    holds: bool
    margin: float
    note: str = field(default="", compare=False)

    @classmethod
    def build(cls, name, lhs, rhs, constant, ratio, note=""):
        lhs, rhs = float(lhs), float(rhs)
        holds = lhs <= rhs + SLACK * max(1.0, abs(rhs))
        return cls(name, lhs, rhs, float(constant), float(ratio), bool(holds), rhs - lhs, note)

    def to_dict(self):
        """Flat mapping with exactly the keys of :data:`REPORT_KEYS`."""
        return {key: getattr(self, key) for key in REPORT_KEYS}


def _safe_ratio(num, den):
    return num / den if den > 0 else 0.0


def wirtinger_check(u):
    """``int u^2 <= (L^2/pi^2) int (u')^2`` for ``u`` vanishing at both ends."""
    L = u.length
    mass = fs.norm_l2_sq(u)
    energy = fs.dirichlet_energy(u)
    constant = L**2 / math.pi**2
    return CheckReport.build("wirtinger", mass, constant * energy, constant,
                             _safe_ratio(mass, energy))


def _require_left_zero(u):
    if isinstance(u, fs.GridFunction):
        scale = float(max(abs(u.values).max(), 0.0))
        if abs(u.values[0]) > 1e-12 * scale:
            raise PreconditionError(
                f"opial_check needs u(0) = 0; got u(0) = {u.values[0]!r}"
            )


def opial_check(u):
    """``int |u u'| <= (L/2) int (u')^2`` for ``u(0) = 0``."""
    _require_left_zero(u)
    L = u.length
    mixed = fs.opial_functional(u)
    energy = fs.dirichlet_energy(u)
    constant = L / 2.0
    return CheckReport.build("opial", mixed, constant * energy, constant,
                             _safe_ratio(mixed, energy))


def identity_residual(u, x):
    """``|u(x)^2 - 2 int_0^x u u' dt|``; the integral is done by quadrature."""
    if not 0.0 <= x <= u.length:
        raise DomainError(f"x must lie in [0, {u.length}]")
    if x == 0.0:
        return 0.0
    ux = fs.evaluate(u, x)
    integral = fs._piecewise_gauss(
        lambda t: u(t) * u.derivative(t), [0.0, float(x)], tol=1e-14
    ).value
    return abs(ux * ux - 2.0 * integral)


def chain_check(u):
    """The three links leading from the mixed energy to a Wirtinger-type bound.

    1. ``int u^2 <= 2 int (L - t) |u u'| dt``   (needs only u(0) = 0)
    2. ``int u^2 <= L int |u u'|``               (needs u(0) = u(L) = 0)
    3. ``int u^2 <= (L^2/2) int (u')^2``

    Link 2 does not follow from link 1 alone (that gives the constant 2L);
    it uses the bound from both endpoints, which is why it is only checked
    for functions vanishing at both ends.
    """
    if not isinstance(u, fs.SineSeries):
        raise TypeError("chain_check needs a SineSeries (both boundary values zero)")
    L = u.length
    mass = fs.norm_l2_sq(u)
    weighted = fs.weighted_opial_functional(u)
    mixed = fs.opial_functional(u)
    energy = fs.dirichlet_energy(u)
    link1 = CheckReport.build("chain_fubini", mass, 2.0 * weighted, 2.0,
                              _safe_ratio(mass, weighted))
    link2 = CheckReport.build(
        "chain_two_sided", mass, L * mixed, L, _safe_ratio(mass, mixed),
        note="constant L uses u(0) = u(L) = 0; the weighted bound alone gives 2L",
    )
    link3 = CheckReport.build("chain_weak_wirtinger", mass, 0.5 * L**2 * energy,
                              0.5 * L**2, _safe_ratio(mass, energy))
    return link1, link2, link3


def interpolation_check(u, p, C):
    """``int |u|^(p+1) <= C (int (u')^2)^((p+1)/2)``."""
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p!r}")
    if not C > 0:
        raise DomainError("C must be positive")
    nonlinear = fs.lp1_functional(u, p)
    energy = fs.dirichlet_energy(u)
    factor = energy ** (0.5 * (p + 1.0))
    return CheckReport.build("interpolation", nonlinear, C * factor, C,
                             _safe_ratio(nonlinear, factor))


def _check_bound_args(p, lam, L, E):
    for name, value in (("p", p), ("lambda", lam), ("L", L), ("E", E)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be positive, got {value!r}")
    if p <= 1.0:
        raise DomainError("p must exceed 1")


def dirichlet_threshold(p, lam, L):
    """``(1/lambda) (pi^2/L^2)^((p+1)/2)``, the lower bound on ``E^((p-1)/2)``."""
    return (math.pi**2 / L**2) ** (0.5 * (p + 1.0)) / lam


def mean_zero_threshold(p, lam, L):
    """Same with the mean-zero constant ``4 pi^2 / L^2``."""
    return (4.0 * math.pi**2 / L**2) ** (0.5 * (p + 1.0)) / lam


def _bound_report(name, threshold, lam, p, E):
    # lhs = threshold, rhs = E^((p-1)/2): holds when E is admissible
    achieved = E ** (0.5 * (p - 1.0))
    return CheckReport.build(name, threshold, achieved, threshold * lam,
                             achieved / threshold)


def energy_lower_bound(p, lam, L, E):
    """Is ``E^((p-1)/2) >= (1/lambda)(pi^2/L^2)^((p+1)/2)``?

    ``lhs`` is the threshold, ``rhs`` the achieved ``E^((p-1)/2)``,
    ``constant`` the lambda-free factor and ``ratio`` is ``rhs / lhs``.
    """
    _check_bound_args(p, lam, L, E)
    return _bound_report("energy_lower_bound", dirichlet_threshold(p, lam, L), lam, p, E)


def mean_zero_energy_bound(p, lam, L, E):
    """As :func:`energy_lower_bound` with ``4 pi^2`` in place of ``pi^2``."""
    _check_bound_args(p, lam, L, E)
    return _bound_report("mean_zero_energy_bound", mean_zero_threshold(p, lam, L), lam, p, E)


def mean_zero_check(u, rel_tol=1e-9):
    """``int u^2 <= (L^2 / 4 pi^2) int (u')^2`` for ``u`` with zero mean.

    The constant is sharp for functions that also satisfy ``u(0) = u(L)``
    (every :class:`SineSeries`, periodic grid data).  Without that
    boundary matching the sharp mean-zero constant is ``L^2/pi^2`` and the
    report may legitimately come back with ``holds=False``.
    """
    avg = fs.mean(u)
    scale = fs.sup_norm(u)
    if abs(avg) > rel_tol * scale:
        raise PreconditionError(f"mean_zero_check needs zero mean; measured mean {avg!r}")
    L = u.length
    mass = fs.norm_l2_sq(u)
    energy = fs.dirichlet_energy(u)
    constant = L**2 / (4.0 * math.pi**2)
    return CheckReport.build("meanzero", mass, constant * energy, constant,
                             _safe_ratio(mass, energy))
