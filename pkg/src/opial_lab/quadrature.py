"""Quadrature: adaptive Gauss-Legendre panels and tanh-sinh for endpoint singularities.

Also hosts the two profile integrals of the Emden-Fowler ground state::

    I0(p) = int_0^1 dt / sqrt(1 - t^(p+1))          = B(1/(p+1), 1/2) / (p+1)
    I1(p) = int_0^1 t^(p+1) dt / sqrt(1 - t^(p+1))  = B((p+2)/(p+1), 1/2) / (p+1)

Integrand callbacks are expected to be side-effect free.  They are called
with numpy arrays when they accept them, and element-wise otherwise.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError, beta

__all__ = [
    "AccuracyError",
    "QuadratureResult",
    "integrate_smooth",
    "integrate_endpoint_singular",
    "beta_by_quadrature",
    "i0",
    "i1",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2**20
_GAUSS_ORDER = 10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0 or self.evaluations < 1:
            raise ValueError("invalid quadrature result")

    def __float__(self):
        return self.value


class AccuracyError(RuntimeError):
    """Requested accuracy not reached within the evaluation budget.

    ``result`` holds the best estimate obtained.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


def _evaluate(f, *args):
    x = args[0]
    try:
        y = np.asarray(f(*args), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).astype(float)
        return y
    except (TypeError, ValueError):
        return np.array([f(*a) for a in zip(*args)], dtype=float)


def _gauss_panel(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _GL_NODES
    return half * float(np.dot(_GL_WEIGHTS, _evaluate(f, x)))


def integrate_smooth(f, a, b, tol=1e-12, max_evals=DEFAULT_BUDGET):
    """Integrate a smooth ``f`` over ``[a, b]`` by globally adaptive bisection.

    Each panel is integrated with a 10-point Gauss rule; its error is
    estimated by comparing with the sum over its two halves.  The panel
    with the largest estimated error is split until the total estimate
    falls below ``max(tol, tol * |value|)``.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if not tol > 0:
        raise DomainError("tol must be positive")

    def refine(lo, hi):
        whole = _gauss_panel(f, lo, hi)
        mid = 0.5 * (lo + hi)
        left = _gauss_panel(f, lo, mid)
        right = _gauss_panel(f, mid, hi)
        return left + right, abs(left + right - whole)

    value, err = refine(a, b)
    evals = 3 * _GAUSS_ORDER
    # max-heap on error: (-err, lo, hi, value)
    heap = [(-err, a, b, value)]
    total_val, total_err = value, err
    while total_err > max(tol, tol * abs(total_val)):
        if not np.isfinite(total_val):
            raise AccuracyError("integrand is not finite on the interval",
                                QuadratureResult(total_val, math.inf, evals))
        if evals + 6 * _GAUSS_ORDER > max_evals:
            raise AccuracyError(
                f"integrate_smooth: budget of {max_evals} evaluations exhausted",
                QuadratureResult(total_val, total_err, evals),
            )
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise AccuracyError(
                "integrate_smooth: panel width reached machine precision",
                QuadratureResult(total_val, total_err, evals),
            )
        lv, le = refine(lo, mid)
        rv, re = refine(mid, hi)
        evals += 6 * _GAUSS_ORDER
        heapq.heappush(heap, (-le, lo, mid, lv))
        heapq.heappush(heap, (-re, mid, hi, rv))
        # recompute sums to avoid drift from repeated subtraction
        total_val = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total_val, total_err, evals)


def _tanh_sinh_nodes(h, offset, x_max):
    """Abscissae k*h + offset (k >= 0 and mirrored) in the DE variable."""
    k = np.arange(0, int(x_max / h) + 2)
    x = k * h + offset
    x = x[x <= x_max]
    if offset == 0.0:
        x = np.concatenate((-x[:0:-1], x))
    else:
        x = np.concatenate((-x[::-1], x))
    y = 0.5 * math.pi * np.sinh(x)
    with np.errstate(over="ignore"):
        t = 1.0 / (1.0 + np.exp(-2.0 * y))
        omt = 1.0 / (1.0 + np.exp(2.0 * y))
    w = math.pi * np.cosh(x) * t * omt
    return x, t, omt, w


# Plain-mode cut: 1 - t is exact for t in [1 - _CUT, 1) and all nodes of the
# core rule keep at least 30 bits of 1 - t.  The two end pieces of width
# _CUT are integrated from a power-law model of the integrand.
_CUT = 2.0**-30


def _power_tail(f, edge, inward):
    """``int`` of ``f`` over the width-``_CUT`` piece ending at ``edge``.

    ``f`` is sampled at distances ``_CUT``, ``_CUT/2``, ``_CUT/4`` from the
    edge (all exactly representable) and modelled as ``c * d^alpha``.
    Returns ``(value, error_estimate, evaluations)``.
    """
    d = _CUT * np.array([1.0, 0.5, 0.25])
    g = _evaluate(f, edge + inward * d)
    if not np.all(np.isfinite(g)):
        raise AccuracyError("integrand is not finite near the endpoint",
                            QuadratureResult(math.nan, math.inf, 3))

    def exponent(g_far, g_near):
        # g(d) ~ c d^alpha fitted through distances (w, w/2); None if no fit
        return math.log2(g_far / g_near) if g_far * g_near > 0.0 else None

    def piece(g_at_width, alpha, width):
        # int_0^width of the model that passes through g(width)
        if alpha is None:
            return width * g_at_width
        if alpha <= -1.0:
            return math.inf
        return width * g_at_width / (alpha + 1.0)

    outer = exponent(g[0], g[1])
    inner = exponent(g[1], g[2])
    coarse = piece(g[0], outer, _CUT)
    fine = piece(g[1], inner, 0.5 * _CUT) + coarse - piece(g[1], outer, 0.5 * _CUT)
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        raise AccuracyError("integrand is not integrable at the endpoint",
                            QuadratureResult(math.nan, math.inf, 3))
    return fine, abs(fine - coarse), 3


def integrate_endpoint_singular(f, tol=1e-10, *, complement=False,
                                max_level=14, max_evals=DEFAULT_BUDGET):
    """Integrate ``f`` over (0, 1) with the tanh-sinh (double exponential) rule.

    Integrable endpoint singularities up to inverse-square-root strength are
    allowed at either end.  With ``complement=True`` the integrand is called
    as ``f(t, one_minus_t)`` where ``one_minus_t`` is computed independently
    of ``t``, and the rule runs all the way into both endpoints.

    Called plainly as ``f(t)``, the integrand cannot be sampled closer to 1
    than a rounded ``t`` allows.  The rule then covers ``[2^-30, 1 - 2^-30]``
    and the two end pieces are integrated from a power-law fit
    ``c * d^alpha`` to three samples at exactly representable distances
    ``d`` from the endpoint.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    x_max = 6.5
    span = 1.0 - 2.0 * _CUT

    def level_sum(h, offset):
        x, t, omt, w = _tanh_sinh_nodes(h, offset, x_max)
        if complement:
            keep = (t > 0.0) & (omt > 0.0) & (w > 0.0)
            vals = _evaluate(f, t[keep], omt[keep])
        else:
            keep = w > 0.0
            t, omt = t[keep], omt[keep]
            s = np.where(t < 0.5, _CUT + span * t, (1.0 - _CUT) - span * omt)
            vals = span * _evaluate(f, s)
        terms = w[keep] * vals
        x = x[keep]
        ends = [(x[0], abs(terms[0])), (x[-1], abs(terms[-1]))] if terms.size else []
        return float(np.sum(terms)), int(keep.sum()), ends

    def outermost(ends, new_ends):
        # track the retained node with the largest |x| on each side
        left = min(ends + new_ends, key=lambda e: e[0])
        right = max(ends + new_ends, key=lambda e: e[0])
        return [left, right]

    end_value, end_err, evals = 0.0, 0.0, 0
    if not complement:
        for edge, inward in ((0.0, 1.0), (1.0, -1.0)):
            v, e, n = _power_tail(f, edge, inward)
            end_value += float(v)
            end_err += float(e)
            evals += n

    h = 1.0
    raw, n, ends = level_sum(h, 0.0)
    evals += n
    estimate = float(h * raw + end_value)
    err = math.inf
    for _ in range(max_level):
        extra, n, new_ends = level_sum(h, 0.5 * h)
        ends = outermost(ends, new_ends)
        evals += n
        raw += extra
        h *= 0.5
        new = float(h * raw + end_value)
        err = abs(new - estimate)
        estimate = new
        if not math.isfinite(estimate):
            raise AccuracyError("integrand produced non-finite values",
                                QuadratureResult(estimate, math.inf, max(evals, 1)))
        target = tol * abs(estimate)
        if max(err, end_err) <= target or (estimate == 0.0 and err == 0.0):
            # Tail past the outermost retained node x: the transformed integrand
            # decays like exp(-(1 - alpha) * pi * sinh x) for an endpoint
            # singularity of order alpha; alpha <= 3/4 gives the factor 4.
            tail = max((4.0 * g / (math.pi * math.cosh(xe)) for xe, g in ends), default=0.0)
            total_err = float(max(err, tail) + end_err)
            if tail > max(target, 1e-300):
                raise AccuracyError(
                    "integrate_endpoint_singular: integrand is not negligible at the "
                    "last representable node",
                    QuadratureResult(estimate, total_err, evals),
                )
            return QuadratureResult(estimate, total_err, evals)
        if evals > max_evals:
            break
    raise AccuracyError(
        "integrate_endpoint_singular: tolerance not reached",
        QuadratureResult(estimate, float(max(err, end_err)), max(evals, 1)),
    )


def beta_by_quadrature(a, b, tol=1e-12):
    """Beta function by direct quadrature of its defining integral."""
    if a <= 0 or b <= 0:
        raise DomainError("Beta arguments must be positive")
    res = integrate_endpoint_singular(
        lambda t, s: t ** (a - 1.0) * s ** (b - 1.0), tol, complement=True
    )
    return res.value


def _check_exponent(p):
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise DomainError(f"exponent p must satisfy p >= 1, got {p!r}")
    return p


def _one_minus_power(t, omt, q):
    # 1 - t**q, accurate near both ends
    with np.errstate(divide="ignore"):
        near_zero = -np.expm1(q * np.log(t))
        near_one = -np.expm1(q * np.log1p(-omt))
    return np.where(t < 0.5, near_zero, near_one)


def _i0_integrand(q):
    return lambda t, omt: 1.0 / np.sqrt(_one_minus_power(t, omt, q))


def _i1_integrand(q):
    return lambda t, omt: t**q / np.sqrt(_one_minus_power(t, omt, q))


def i0(p, method="beta", tol=1e-13):
    """``int_0^1 dt / sqrt(1 - t^(p+1))``.

    ``method="beta"`` uses the Beta identity; ``method="quadrature"``
    integrates numerically (the independent cross-check).
    """
    p = _check_exponent(p)
    q = p + 1.0
    if method == "beta":
        return beta(1.0 / q, 0.5) / q
    if method == "quadrature":
        return integrate_endpoint_singular(_i0_integrand(q), tol, complement=True).value
    raise ValueError(f"unknown method {method!r}")


def i1(p, method="beta", tol=1e-13):
    """``int_0^1 t^(p+1) dt / sqrt(1 - t^(p+1))``; see :func:`i0`."""
    p = _check_exponent(p)
    q = p + 1.0
    if method == "beta":
        return beta((p + 2.0) / q, 0.5) / q
    if method == "quadrature":
        return integrate_endpoint_singular(_i1_integrand(q), tol, complement=True).value
    raise ValueError(f"unknown method {method!r}")
