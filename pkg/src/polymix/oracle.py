"""
Independent numerical oracles: quadrature over the support and Monte Carlo.

Nothing here uses the gamma-function closed forms except to locate a safe
truncation point for half-line integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from polymix.errors import DomainError, PolymixError
from polymix.family import Family
from polymix.quadrature import DEFAULT_QUADRATURE, QuadratureControl, integrate

__all__ = [
    "QuadratureControl",
    "OracleReport",
    "integrate",
    "tail_cutoff",
    "integrate_over_support",
    "check_family",
    "monte_carlo_reliability",
]

_GEOMETRIC_LEVELS = 30


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    closed_form: float
    oracle_value: float
    abs_diff: float
    tolerance: float
    passed: bool

    @classmethod
    def compare(cls, quantity: str, closed_form: float, oracle_value: float, tolerance: float):
        diff = abs(closed_form - oracle_value)
        passed = bool(math.isfinite(diff) and diff <= tolerance)
        return cls(quantity, float(closed_form), float(oracle_value), float(diff), float(tolerance), passed)


def tail_cutoff(f: Family, mass_tol: float, order: float = 0.0) -> float:
    """Smallest-ish ``x_max`` with ``E[X^order; X > x_max] < mass_tol``.

    Doubling brackets the point, then bisection on the log tail narrows it to
    within 0.1 %; the returned point always satisfies the bound.
    """
    if not (mass_tol > 0):
        raise DomainError(f"mass_tol must be positive, got {mass_tol!r}")
    target = math.log(mass_tol)
    x = (1.0 / f.beta) ** (1.0 / f.d)
    lo = 0.0
    while f.log_tail_moment(x, order) >= target:
        lo = x
        x *= 2.0
    hi = x
    while hi - lo > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if f.log_tail_moment(mid, order) < target:
            hi = mid
        else:
            lo = mid
    return hi


def integrate_over_support(
    f: Family,
    g: Callable[[np.ndarray], np.ndarray],
    upper: float | None = None,
    abs_tol: float | None = None,
    ctl: QuadratureControl = DEFAULT_QUADRATURE,
    order: float = 0.0,
) -> float:
    """``int_0^upper g(x) dx`` for an integrand living on the support of ``f``.

    ``upper`` defaults to :func:`tail_cutoff` at ``ctl.tail_mass_tol`` for the
    ``order``-th partial moment.  For ``d < 1`` the integral is taken in
    ``y = beta x^d`` so the cusp of ``exp(-beta x^d)`` at the origin and the
    stretched tail become a gamma-shaped integrand.
    """
    if upper is None:
        upper = tail_cutoff(f, ctl.tail_mass_tol, order)
    tol = ctl.abs_tol if abs_tol is None else abs_tol
    qctl = QuadratureControl(tol, ctl.max_depth, ctl.tail_mass_tol)
    if f.d >= 1.0:
        return integrate(g, upper, qctl, geometric_levels=_GEOMETRIC_LEVELS)
    beta, d = f.beta, f.d
    jac_scale = 1.0 / (d * beta ** (1.0 / d))

    def in_y(y):
        x = (y / beta) ** (1.0 / d)
        return g(x) * jac_scale * y ** (1.0 / d - 1.0)

    return integrate(in_y, beta * upper ** d, qctl, geometric_levels=_GEOMETRIC_LEVELS)


def _safe(name: str, closed: float, oracle: Callable[[], float], tol: float) -> OracleReport:
    try:
        value = oracle()
    except PolymixError:
        return OracleReport(name, closed, math.nan, math.nan, tol, False)
    return OracleReport.compare(name, closed, value, tol)


def check_family(f: Family, ctl: QuadratureControl = DEFAULT_QUADRATURE) -> list[OracleReport]:
    """Cross-check normalization, moments 1-4 and the CDF at five points by quadrature.

    Tolerances: 1e-8 absolute for normalization and CDF values, 1e-7
    relative for moments.  Integration failures become failed reports.
    """
    reports = [_safe("normalization", 1.0, lambda: integrate_over_support(f, f.pdf, ctl=ctl), 1e-8)]
    for r in (1, 2, 3, 4):
        closed = f.raw_moment(r)

        def moment(r=r, closed=closed):
            upper = tail_cutoff(f, ctl.tail_mass_tol * closed, order=r)
            return integrate_over_support(
                f, lambda x: x ** r * f.pdf(x), upper=upper, abs_tol=ctl.abs_tol * max(1.0, closed), ctl=ctl
            )

        reports.append(_safe(f"moment({r})", closed, moment, 1e-7 * closed))
    mean = f.raw_moment(1)
    for k in (0.25, 0.5, 1.0, 2.0, 3.0):
        x = k * mean
        reports.append(
            _safe(f"cdf({x:.6g})", f.cdf(x), lambda x=x: integrate_over_support(f, f.pdf, upper=x, ctl=ctl), 1e-8)
        )
    return reports


def monte_carlo_reliability(strength: Family, stress: Family, n: int = 10**6, seed: int = 0) -> tuple[float, float]:
    """Estimate ``P(Y < X)`` from ``n`` paired draws; returns ``(estimate, standard error)``."""
    ss = np.random.SeedSequence(seed)
    sx, sy = ss.spawn(2)
    x = strength.sample(n, np.random.default_rng(sx))
    y = stress.sample(n, np.random.default_rng(sy))
    hits = float(np.mean(y < x))
    return hits, math.sqrt(max(hits * (1.0 - hits), 1e-300) / n)
