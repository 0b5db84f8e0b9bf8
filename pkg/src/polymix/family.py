"""
Polynomial-weighted exponential-power densities.

A member of the family has density

.. math::
    f(x) = c \\Big(\\sum_{i=0}^{p} \\theta_i x^i\\Big) e^{-\\beta x^d}, \\qquad x > 0,

with :math:`\\theta_i \\ge 0`, :math:`\\beta > 0`, :math:`d > 0`.  Writing
:math:`a_i = (i+1)/d` and :math:`w_i = \\theta_i \\Gamma(a_i) \\beta^{-a_i}`,
the normalizing constant is :math:`c = d / \\sum_i w_i` and the density is the
finite mixture of generalized gamma laws :math:`x^i e^{-\\beta x^d}` with
weights :math:`w_i / \\sum_j w_j`.  Distribution function, moments and
characteristic function all follow from that decomposition.

All gamma-weighted sums are accumulated in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from polymix.errors import ConvergenceError, DomainError, TailUnderflowError
from polymix.specfun import (
    DEFAULT_SERIES,
    SeriesControl,
    log_gamma,
    log_regularized_gammas,
    logsumexp,
)

__all__ = [
    "FamilyParams",
    "Family",
    "GGComponent",
    "MixtureView",
    "SummaryStats",
    "CFValue",
    "make_family",
]


@dataclass(frozen=True)
class FamilyParams:
    """Raw parameters ``(theta_0..theta_p, beta, d)``; ``p = len(theta) - 1``."""

    theta: tuple[float, ...]
    beta: float
    d: float

    def __post_init__(self):
        theta = tuple(float(t) for t in np.atleast_1d(np.asarray(self.theta, dtype=float)))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "d", float(self.d))
        if not theta:
            raise DomainError("theta must contain at least one coefficient")
        for i, t in enumerate(theta):
            if not math.isfinite(t):
                raise DomainError(f"theta[{i}] must be finite, got {t!r}")
            if t < 0.0:
                raise DomainError(f"theta[{i}] = {t!r} is negative; coefficients must be >= 0")
        if not any(t > 0.0 for t in theta):
            raise DomainError("all theta coefficients are zero; at least one must be > 0")
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be positive and finite, got {self.beta!r}")
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise DomainError(f"d must be positive and finite, got {self.d!r}")

    @property
    def p(self) -> int:
        return len(self.theta) - 1


@dataclass(frozen=True)
class GGComponent:
    """Generalized gamma law with density ``d beta^a x^(d a - 1) e^(-beta x^d) / Gamma(a)``."""

    index: int
    shape: float
    rate: float
    power: float

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            logx = np.log(x)
        log_f = (
            math.log(self.power) + self.shape * math.log(self.rate) - log_gamma(self.shape)
            + np.where(x > 0, self.index * logx, 0.0 if self.index == 0 else -np.inf)
            - self.rate * x ** self.power
        )
        return np.exp(log_f)

    def describe(self) -> str:
        """Short label: ``Exp(b)``, ``Ga(k,b)`` when ``d = 1``, else ``GGa(d,b,i+1)``."""
        if self.power == 1.0:
            if self.index == 0:
                return f"Exp({_fmt(self.rate)})"
            return f"Ga({self.index + 1},{_fmt(self.rate)})"
        return f"GGa({_fmt(self.power)},{_fmt(self.rate)},{self.index + 1})"


def _fmt(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class MixtureView:
    components: tuple[GGComponent, ...]
    weights: tuple[float, ...]

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return sum(w * comp.pdf(x) for comp, w in zip(self.components, self.weights))


class SummaryStats(NamedTuple):
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float


@dataclass(frozen=True)
class CFValue:
    """Characteristic function value and how it was obtained (``series`` or ``quadrature``)."""

    value: complex
    method: str
    terms: int = 0


@dataclass(frozen=True)
class Family:
    """A validated, normalized family member.

    Build with :func:`make_family`.  Instances are immutable; all evaluation
    methods are pure.
    """

    params: FamilyParams
    log_c: float
    mp: tuple[float, ...]
    log_denominator: float
    _log_theta: np.ndarray = field(repr=False, compare=False)

    @property
    def theta(self) -> tuple[float, ...]:
        return self.params.theta

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def d(self) -> float:
        return self.params.d

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def c(self) -> float:
        return math.exp(self.log_c)

    @property
    def shapes(self) -> np.ndarray:
        return (np.arange(self.p + 1) + 1.0) / self.d

    def _nonzero(self):
        return [i for i, t in enumerate(self.theta) if t > 0.0]

    # -- density --------------------------------------------------------

    def _check_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.isnan(x).any() or (x < 0).any() or np.isinf(x).any():
            raise DomainError("x must be finite and >= 0")
        return x

    def _log_pdf(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            logx = np.log(x)
            terms = [
                self._log_theta[i] + (i * logx if i else np.zeros_like(x))
                for i in self._nonzero()
            ]
            stacked = np.stack(terms)
            m = np.max(stacked, axis=0)
            safe_m = np.where(np.isfinite(m), m, 0.0)
            log_poly = safe_m + np.log(np.sum(np.exp(stacked - safe_m), axis=0))
            log_poly = np.where(np.isfinite(m), log_poly, -np.inf)
        return self.log_c + log_poly - self.beta * x ** self.d

    def log_pdf(self, x):
        """Log density; ``-inf`` at ``x = 0`` when ``theta_0 = 0``."""
        x = self._check_x(x)
        out = self._log_pdf(np.atleast_1d(x)).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def pdf(self, x):
        """Density at ``x >= 0`` (scalar or array); ``pdf(0) = c * theta_0``."""
        x = self._check_x(x)
        out = np.exp(self._log_pdf(np.atleast_1d(x))).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def _log_pq(self, x: np.ndarray):
        z = self.beta * x ** self.d
        log_p = []
        log_q = []
        log_b = math.log(self.beta)
        for i in self._nonzero():
            a = self.shapes[i]
            lp, lq = log_regularized_gammas(a, z)
            # log weight from logs directly: a tiny theta_i can underflow mp[i] to 0
            lw = self._log_theta[i] + log_gamma(a) - a * log_b - self.log_denominator
            log_p.append(lw + lp)
            log_q.append(lw + lq)
        return np.stack(log_p), np.stack(log_q)

    def cdf(self, x):
        """Distribution function ``F(x) = sum_i mp_i P(a_i, beta x^d)``.

        Past the median the complement ``1 - S(x)`` is used instead, so that
        ``F`` reaches exactly 1 and ``F + S = 1`` holds to rounding.
        """
        x = self._check_x(x)
        log_p, log_q = self._log_pq(np.atleast_1d(x))
        lower = np.exp(log_p).sum(axis=0)
        upper = np.exp(log_q).sum(axis=0)
        out = np.where(lower <= upper, lower, 1.0 - upper)
        out = np.clip(out, 0.0, 1.0).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def log_survival(self, x):
        """Log of ``1 - F(x)``, summed from upper incomplete gammas."""
        x = self._check_x(x)
        _, log_q = self._log_pq(np.atleast_1d(x))
        m = np.max(log_q, axis=0)
        safe_m = np.where(np.isfinite(m), m, 0.0)
        out = safe_m + np.log(np.sum(np.exp(log_q - safe_m), axis=0))
        out = np.minimum(np.where(np.isfinite(m), out, -np.inf), 0.0).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def survival(self, x):
        """Reliability function ``S(x) = 1 - F(x)``."""
        out = np.exp(self.log_survival(x))
        return float(out) if np.ndim(out) == 0 else out

    def hazard(self, x):
        """Hazard rate ``f(x) / S(x)``, evaluated as a difference of logs."""
        x = self._check_x(x)
        log_s = np.atleast_1d(self.log_survival(x))
        if np.isneginf(log_s).any():
            raise TailUnderflowError("survival function underflowed to 0; hazard undefined")
        out = np.exp(self._log_pdf(np.atleast_1d(x)) - log_s).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def log_tail_moment(self, x: float, r: float = 0.0) -> float:
        """``log E[X^r; X > x]``, the tail of the ``r``-th partial moment."""
        x = float(self._check_x(x))
        z = self.beta * x ** self.d
        vals = []
        for i in self._nonzero():
            a = self.shapes[i] + r / self.d
            _, lq = log_regularized_gammas(a, z)
            vals.append(self._log_theta[i] - a * math.log(self.beta) + log_gamma(a) + float(lq))
        return logsumexp(vals) - self.log_denominator

    # -- moments ----------------------------------------------------------

    def _log_moment_terms(self, r: float) -> np.ndarray:
        r = float(r)
        if not math.isfinite(r) or r < 0.0:
            raise DomainError(f"moment order must be finite and >= 0, got {r!r}")
        log_b = math.log(self.beta)
        vals = []
        for i in self._nonzero():
            a = (i + r + 1.0) / self.d
            vals.append(self._log_theta[i] + log_gamma(a) - a * log_b)
        return np.array(vals)

    def log_raw_moment(self, r: float) -> float:
        return logsumexp(self._log_moment_terms(r)) - self.log_denominator

    def raw_moment(self, r: float) -> float:
        """``E[X^r]`` for real ``r >= 0`` as a ratio of gamma-weighted sums."""
        if r == 0:
            return 1.0
        num = self._log_moment_terms(r)
        den = self._log_moment_terms(0.0)
        shift = max(num.max(), den.max())
        if shift - min(num.max(), den.max()) > 600.0:
            return math.exp(logsumexp(num) - logsumexp(den))
        return math.fsum(np.exp(num - shift)) / math.fsum(np.exp(den - shift))

    def summary_stats(self) -> SummaryStats:
        m1, m2, m3, m4 = (self.raw_moment(r) for r in (1, 2, 3, 4))
        var = m2 - m1 * m1
        mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 ** 3
        mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 ** 4
        return SummaryStats(m1, var, mu3 / var ** 1.5, mu4 / (var * var) - 3.0)

    # -- characteristic function -------------------------------------------

    def _cf_series(self, t: float, ctl: SeriesControl) -> CFValue:
        # sum_r (i t)^r / r! E[X^r]; powers of i cycle through 1, i, -1, -i
        re: list[float] = []
        im: list[float] = []
        log_t = math.log(abs(t))
        sign_t = 1.0 if t > 0 else -1.0
        partial = 1.0 + 0j
        prev = math.inf
        biggest = 0.0
        for r in range(ctl.max_terms):
            log_mag = r * log_t - math.lgamma(r + 1.0) + self.log_raw_moment(r)
            if log_mag > math.log(_CF_MAX_TERM):
                raise ConvergenceError("characteristic function series terms grow too large")
            mag = math.exp(log_mag) * sign_t ** r
            biggest = max(biggest, abs(mag))
            phase = r % 4
            if phase == 0:
                re.append(mag)
            elif phase == 1:
                im.append(mag)
            elif phase == 2:
                re.append(-mag)
            else:
                im.append(-mag)
            partial = complex(math.fsum(re), math.fsum(im))
            if r > 0 and abs(mag) < prev and abs(mag) < ctl.tol * abs(partial):
                return CFValue(partial, "series", r + 1)
            prev = abs(mag)
        raise ConvergenceError(f"characteristic function series did not converge within {ctl.max_terms} terms")

    def _cf_quadrature(self, t: float, abs_tol: float) -> CFValue:
        from polymix.oracle import integrate_over_support

        re = integrate_over_support(self, lambda x: np.cos(t * x) * self.pdf(x), abs_tol=abs_tol)
        im = integrate_over_support(self, lambda x: np.sin(t * x) * self.pdf(x), abs_tol=abs_tol)
        return CFValue(complex(re, im), "quadrature")

    def cf(self, t: float, ctl: SeriesControl = DEFAULT_SERIES, method: str = "auto",
           abs_tol: float = 1e-10) -> CFValue:
        """Characteristic function ``E[exp(i t X)]``.

        ``method="series"`` sums the moment series and raises
        :class:`ConvergenceError` when it does not converge (always the case
        for ``d < 1``; for ``d = 1`` it needs ``|t| < beta``).  ``"quadrature"``
        integrates ``cos`` and ``sin`` against the density.  ``"auto"`` tries
        the series and falls back to quadrature; the returned
        :class:`CFValue` records which one answered.
        """
        t = float(t)
        if not math.isfinite(t):
            raise DomainError("t must be finite")
        if t == 0.0:
            return CFValue(1.0 + 0.0j, "exact", 0)
        if method not in ("auto", "series", "quadrature"):
            raise DomainError(f"unknown cf method {method!r}")
        if method in ("auto", "series"):
            try:
                return self._cf_series(t, ctl)
            except ConvergenceError:
                if method == "series":
                    raise
        return self._cf_quadrature(t, abs_tol)

    # -- mixture and sampling -------------------------------------------------

    def mixture_view(self) -> MixtureView:
        comps = tuple(GGComponent(i, float(self.shapes[i]), self.beta, self.d) for i in self._nonzero())
        weights = tuple(self.mp[i] for i in self._nonzero())
        return MixtureView(comps, weights)

    def sample_components(self, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``n`` values together with the index ``i`` of the term each came from."""
        if int(n) != n or n < 1:
            raise DomainError(f"sample size must be a positive integer, got {n!r}")
        n = int(n)
        rng = np.random.default_rng(seed)
        view = self.mixture_view()
        idx = np.array([c.index for c in view.components])
        w = np.array(view.weights)
        which = rng.choice(len(idx), size=n, p=w / w.sum())
        out = np.empty(n)
        for k, comp in enumerate(view.components):
            sel = which == k
            m = int(sel.sum())
            if m:
                g = standard_gamma(comp.shape, m, rng)
                out[sel] = (g / self.beta) ** (1.0 / self.d)
        return out, idx[which]

    def sample(self, n: int, seed: int) -> np.ndarray:
        """``n`` exact draws; identical ``(n, seed)`` give identical output."""
        return self.sample_components(n, seed)[0]


_CF_MAX_TERM = 1e6


def standard_gamma(shape: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Gamma(shape, 1) variates by Marsaglia and Tsang's squeeze-rejection method.

    Shapes below one are boosted: ``G(a) = G(a + 1) * U**(1/a)``.
    """
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    dd = a - 1.0 / 3.0
    cc = 1.0 / math.sqrt(9.0 * dd)
    out = np.empty(n)
    filled = 0
    while filled < n:
        need = n - filled
        m = need + need // 4 + 16
        x = rng.standard_normal(m)
        u = rng.random(m)
        v = (1.0 + cc * x) ** 3
        ok = v > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            accept = ok & (
                (u < 1.0 - 0.0331 * x ** 4)
                | (np.log(u) < 0.5 * x * x + dd * (1.0 - v + np.log(np.where(ok, v, 1.0))))
            )
        got = (dd * v)[accept][:need]
        out[filled:filled + got.size] = got
        filled += got.size
    if boost:
        out *= rng.random(n) ** (1.0 / shape)
    return out


def make_family(params: FamilyParams | None = None, *, theta: Sequence[float] | None = None,
                beta: float | None = None, d: float = 1.0) -> Family:
    """Validate parameters and precompute the normalizing constant and mixing proportions.

    Accepts either a :class:`FamilyParams` or the keyword triple
    ``theta=..., beta=..., d=...``.
    """
    if params is None:
        if theta is None or beta is None:
            raise DomainError("make_family needs FamilyParams or theta and beta")
        params = FamilyParams(tuple(theta), beta, d)
    theta_arr = np.asarray(params.theta, dtype=float)
    with np.errstate(divide="ignore"):
        log_theta = np.log(theta_arr)
    shapes = (np.arange(params.p + 1) + 1.0) / params.d
    log_b = math.log(params.beta)
    log_w = np.full(params.p + 1, -np.inf)
    for i, t in enumerate(params.theta):
        if t > 0.0:
            log_w[i] = log_theta[i] + log_gamma(shapes[i]) - shapes[i] * log_b
    log_den = logsumexp(log_w[np.isfinite(log_w)])
    scaled = np.exp(log_w - np.max(log_w))
    mp = scaled / math.fsum(scaled)
    return Family(
        params=params,
        log_c=math.log(params.d) - log_den,
        mp=tuple(float(v) for v in mp),
        log_denominator=log_den,
        _log_theta=log_theta,
    )
