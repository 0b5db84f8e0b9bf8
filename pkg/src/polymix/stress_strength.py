"""
Stress-strength reliability ``R = P(Y < X)`` for independent family members.

``X`` (strength) has parameters ``(theta, beta, d)`` and ``Y`` (stress) has
``(theta*, beta*, d*)``.  Expanding the stress CDF with the alternating
lower-incomplete-gamma series and integrating term by term gives

.. math::
    R = \\frac{c\\,\\tau}{d} \\sum_{i,j} \\theta_i \\theta^*_j
        \\sum_{k \\ge 0} \\frac{(-1)^k \\beta^{*k}\\,\\Gamma(b_{ijk}/d)}
        {k!\\,(u_j + k)\\,\\beta^{b_{ijk}/d}},
    \\qquad u_j = \\frac{j+1}{d^*},\\; b_{ijk} = i + j + k d^* + 2,

where ``c`` is the strength normalizing constant and ``1/tau`` the stress
gamma-weighted sum.  The inner series converges only when
``beta* / beta**(d*/d)`` is small enough, so quadrature of
``f_X(x) F_Y(x)`` is the production route and the series is a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polymix.errors import ConvergenceError, DomainError
from polymix.family import Family
from polymix.oracle import integrate_over_support, tail_cutoff
from polymix.quadrature import DEFAULT_QUADRATURE, QuadratureControl
from polymix.specfun import DEFAULT_SERIES, SeriesControl, log_gamma

__all__ = [
    "StressStrengthResult",
    "reliability_quadrature",
    "reliability_series",
    "reliability",
]

_EPS = np.finfo(float).eps
# largest tolerated rounding error from cancellation in the signed series
_MAX_ROUNDING = 1e-8
_LOG_OVERFLOW = 700.0
# below this rate ratio the raw series converges fast enough to use as is
_DIRECT_RATIO = 0.5


@dataclass(frozen=True)
class StressStrengthResult:
    r_series: float | None
    r_quadrature: float
    terms_used: int
    discrepancy: float | None
    series_error: str | None = None


def reliability_quadrature(strength: Family, stress: Family, tol: float = 1e-10,
                           ctl: QuadratureControl = DEFAULT_QUADRATURE) -> float:
    """``int_0^inf f_X(x) F_Y(x) dx`` to absolute error ``tol``.

    The range is cut where both distributions hold less than ``tol / 10``
    beyond it.
    """
    if not (0.0 < tol <= 1e-3):
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol!r}")
    upper = max(tail_cutoff(strength, tol / 10.0), tail_cutoff(stress, tol / 10.0))
    value = integrate_over_support(
        strength,
        lambda x: strength.pdf(x) * stress.cdf(x),
        upper=upper,
        abs_tol=tol / 2.0,
        ctl=ctl,
    )
    return min(max(value, 0.0), 1.0)


def _direct_terms(strength: Family, stress: Family, i: int, j: int, log_outer: float,
                  ctl: SeriesControl, sink: tuple[list, list]) -> int:
    # (-1)^k beta*^k Gamma(b_k / d) / (k! (u + k) beta^(b_k / d)),  b_k = i + j + k d* + 2
    beta, d = strength.beta, strength.d
    log_beta = math.log(beta)
    log_beta_s = math.log(stress.beta)
    d_s = stress.d
    u = (j + 1.0) / d_s
    pos, neg = sink
    partial = 0.0
    prev = math.inf
    for k in range(ctl.max_terms):
        a = (i + j + k * d_s + 2.0) / d
        log_mag = (
            log_outer + k * log_beta_s + log_gamma(a) - math.lgamma(k + 1.0)
            - math.log(u + k) - a * log_beta
        )
        if log_mag > _LOG_OVERFLOW:
            raise ConvergenceError(f"stress-strength series overflows at (i={i}, j={j}, k={k})")
        mag = math.exp(log_mag)
        (neg if k % 2 else pos).append(mag)
        partial += -mag if k % 2 else mag
        if k > 0 and mag < prev and mag < ctl.tol * abs(partial):
            return k + 1
        prev = mag
    raise ConvergenceError(
        f"stress-strength inner series did not converge within {ctl.max_terms} terms "
        f"(i={i}, j={j}); beta*/beta^(d*/d) is probably too large"
    )


def _euler_terms(strength: Family, stress: Family, i: int, j: int, log_outer: float,
                 ctl: SeriesControl, sink: tuple[list, list]) -> int:
    # Equal powers only.  With m = (i+j+2)/d, u = (j+1)/d, q = beta*/beta the
    # inner sum is beta^-m Gamma(m)/u 2F1(m, u; u+1; -q); Pfaff's transformation
    # rewrites it as a series in w = q/(1+q) < 1 that converges for every q:
    #   beta^-m Gamma(m) (1+q)^-u sum_k (s)_k w^k / (k! (u+k)),  s = 1 - (i+1)/d.
    # For integer (i+1)/d the series terminates.
    beta, d = strength.beta, strength.d
    q = stress.beta / beta
    m = (i + j + 2.0) / d
    u = (j + 1.0) / d
    s = 1.0 - (i + 1.0) / d
    log_w = math.log(q) - math.log1p(q)
    base = log_outer + log_gamma(m) - m * math.log(beta) - u * math.log1p(q)
    pos, neg = sink
    log_poch = 0.0
    sign = 1.0
    partial = 0.0
    prev = math.inf
    for k in range(ctl.max_terms):
        if k > 0:
            factor = s + k - 1.0
            if factor == 0.0:
                return k
            log_poch += math.log(abs(factor))
            if factor < 0:
                sign = -sign
        mag = math.exp(base + log_poch + k * log_w - math.lgamma(k + 1.0) - math.log(u + k))
        (pos if sign > 0 else neg).append(mag)
        partial += sign * mag
        if k > 0 and mag < prev and mag < ctl.tol * abs(partial):
            return k + 1
        prev = mag
    raise ConvergenceError(f"transformed stress-strength series did not converge (i={i}, j={j})")


def _series_oriented(strength: Family, stress: Family, ctl: SeriesControl) -> tuple[float, int]:
    # c * tau / d, with tau the reciprocal of the stress gamma-weighted sum
    log_pref = strength.log_c - stress.log_denominator - math.log(strength.d)
    equal_powers = strength.d == stress.d
    use_euler = equal_powers and stress.beta / strength.beta >= _DIRECT_RATIO
    pos: list[float] = []
    neg: list[float] = []
    terms_used = 0
    for i, th in enumerate(strength.theta):
        if th <= 0.0:
            continue
        for j, th_s in enumerate(stress.theta):
            if th_s <= 0.0:
                continue
            log_outer = log_pref + math.log(th) + math.log(th_s)
            inner = _euler_terms if use_euler else _direct_terms
            terms_used += inner(strength, stress, i, j, log_outer, ctl, (pos, neg))
    p_sum = math.fsum(pos)
    n_sum = math.fsum(neg)
    # each term carries a few ulps from exp(log-gamma sums)
    rounding = 64.0 * _EPS * (p_sum + n_sum)
    if rounding > _MAX_ROUNDING:
        raise ConvergenceError(
            f"stress-strength series lost precision to cancellation (term mass {p_sum + n_sum:.3g})"
        )
    return p_sum - n_sum, terms_used


def reliability_series(strength: Family, stress: Family,
                       ctl: SeriesControl = DEFAULT_SERIES) -> tuple[float, int]:
    """Term-by-term series for ``P(Y < X)``; returns ``(R, inner terms used)``.

    Terms are formed from log magnitudes and the positive and negative parts
    are summed separately with :func:`math.fsum`.

    The raw inner series only converges for small ``beta*/beta^(d*/d)``.  Two
    exact rearrangements extend the range:

    * equal powers (``d = d*``) with ``beta*/beta >= 0.5`` use the Euler
      (Pfaff) transform of the inner series, which converges for any rates;
    * ``d* > d`` makes every inner series diverge, so the complementary
      series is used, ``R = 1 - P(X < Y)``.

    Raises
    ------
    ConvergenceError
        When an inner series stops decreasing, overflows, exhausts
        ``ctl.max_terms``, or cancels so badly that the result would carry a
        rounding error above 1e-8.
    """
    if stress.d > strength.d:
        value, terms = _series_oriented(stress, strength, ctl)
        return 1.0 - value, terms
    return _series_oriented(strength, stress, ctl)


def reliability(strength: Family, stress: Family, method: str = "both", tol: float = 1e-10,
                ctl: SeriesControl = DEFAULT_SERIES) -> StressStrengthResult:
    """Evaluate ``P(Y < X)`` by quadrature and, unless ``method="quadrature"``, by the series.

    With ``method="both"`` a series failure is recorded in the result rather
    than raised; with ``method="series"`` it propagates.
    """
    if method not in ("both", "series", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    r_series = None
    terms = 0
    err = None
    if method in ("both", "series"):
        try:
            r_series, terms = reliability_series(strength, stress, ctl)
        except ConvergenceError as exc:
            if method == "series":
                raise
            err = str(exc)
    r_quad = reliability_quadrature(strength, stress, tol)
    disc = abs(r_series - r_quad) if r_series is not None else None
    return StressStrengthResult(r_series, r_quad, terms, disc, err)
