"""
Named sub-models of the family and their closed-form mixing proportions.

Each entry maps its own parameters onto ``(theta, beta, d)``.  The
``analytic_mp`` callables return the published closed-form weights of the
non-zero terms, in increasing power of ``x``; they are independent of the
gamma-function evaluation in :mod:`polymix.family` and serve as golden values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from polymix.errors import CatalogError, DomainError
from polymix.family import Family, FamilyParams, make_family

__all__ = [
    "CatalogEntry",
    "CATALOG",
    "build_named",
    "build_params",
    "build_binomial",
    "build_example1",
    "list_catalog",
]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    param_names: tuple[str, ...]
    build: Callable[..., FamilyParams]
    analytic_mp: Callable[..., tuple[float, ...]]
    reference: str
    integer_params: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.param_names)


def _ratios(*parts: float) -> tuple[float, ...]:
    total = sum(parts)
    return tuple(v / total for v in parts)


def _single_term(k: int, beta: float, d: float) -> FamilyParams:
    return FamilyParams(tuple([0.0] * k + [1.0]), beta, d)


def _one(*_args) -> tuple[float, ...]:
    return (1.0,)


_ENTRIES = [
    CatalogEntry(
        "exponential", ("beta",),
        lambda b: FamilyParams((1.0,), b, 1.0),
        _one, "Exp(beta), common",
    ),
    CatalogEntry(
        "gamma", ("alpha", "beta"),
        lambda a, b: _single_term(int(a) - 1, b, 1.0),
        _one, "Ga(alpha, beta) with integer alpha, common", ("alpha",),
    ),
    CatalogEntry(
        "weibull", ("d", "beta"),
        lambda d, b: _single_term(int(d) - 1, b, d),
        _one, "We(d, beta) with integer d, Weibull (1951) / Frechet (1927)", ("d",),
    ),
    CatalogEntry(
        "generalized_gamma", ("d", "beta", "b"),
        lambda d, beta, b: _single_term(int(b) - 1, beta, d),
        _one, "GGa(d, beta, b) with integer b, Stacy (1962)", ("b",),
    ),
    CatalogEntry(
        "lindley", ("beta",),
        lambda b: FamilyParams((1.0, 1.0), b, 1.0),
        lambda b: _ratios(b, 1.0), "Lindley (1958)",
    ),
    CatalogEntry(
        "aradhana", ("beta",),
        lambda b: FamilyParams((1.0, 2.0, 1.0), b, 1.0),
        lambda b: _ratios(b * b, 2 * b, 2.0), "Shanker (2016), Aradhana",
    ),
    CatalogEntry(
        "ishita", ("beta",),
        lambda b: FamilyParams((b, 0.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 3, 2.0), "Shanker and Shukla (2017), Ishita",
    ),
    CatalogEntry(
        "akash", ("beta",),
        lambda b: FamilyParams((1.0, 0.0, 1.0), b, 1.0),
        lambda b: _ratios(b * b, 2.0), "Shanker (2015), Akash",
    ),
    CatalogEntry(
        "amarendra", ("beta",),
        lambda b: FamilyParams((1.0, 1.0, 1.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 3, b * b, 2 * b, 6.0), "Shanker (2016), Amarendra",
    ),
    CatalogEntry(
        "sujatha", ("beta",),
        lambda b: FamilyParams((1.0, 1.0, 1.0), b, 1.0),
        lambda b: _ratios(b * b, b, 2.0), "Shanker (2016), Sujatha",
    ),
    CatalogEntry(
        "shanker", ("beta",),
        lambda b: FamilyParams((b, 1.0), b, 1.0),
        lambda b: _ratios(b * b, 1.0), "Shanker (2015), Shanker",
    ),
    CatalogEntry(
        "akshaya", ("beta",),
        lambda b: FamilyParams((1.0, 3.0, 3.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 3, 3 * b * b, 6 * b, 6.0), "Shanker (2017), Akshaya",
    ),
    CatalogEntry(
        "suja", ("beta",),
        lambda b: FamilyParams((1.0, 0.0, 0.0, 0.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 4, 24.0), "Shanker (2017), Suja",
    ),
    CatalogEntry(
        "devya", ("beta",),
        lambda b: FamilyParams((1.0, 1.0, 1.0, 1.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 4, b ** 3, 2 * b * b, 6 * b, 24.0), "Shanker (2016), Devya",
    ),
    CatalogEntry(
        "quasi_lindley", ("alpha", "beta"),
        lambda a, b: FamilyParams((a, b), b, 1.0),
        lambda a, b: _ratios(a, 1.0), "Shanker and Mishra (2013), quasi Lindley",
    ),
    CatalogEntry(
        "gen_sujatha", ("alpha", "beta"),
        lambda a, b: FamilyParams((1.0, 1.0, a), b, 1.0),
        lambda a, b: _ratios(b * b, b, 2 * a), "Shanker et al. (2017), generalized Sujatha",
    ),
    CatalogEntry(
        # only theta_0 and theta_4 are set, so the degree is 4
        "rani", ("beta",),
        lambda b: FamilyParams((b, 0.0, 0.0, 0.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 5, 24.0), "Shanker (2017), Rani",
    ),
    CatalogEntry(
        "garima", ("beta",),
        lambda b: FamilyParams((b + 1.0, b), b, 1.0),
        lambda b: _ratios(b + 1.0, 1.0), "Shanker (2016), Garima",
    ),
    CatalogEntry(
        "janardan", ("alpha", "mu"),
        lambda a, mu: FamilyParams((1.0, a), mu / a, 1.0),
        lambda a, mu: _ratios(mu, a * a), "Shanker et al. (2013), Janardan",
    ),
    CatalogEntry(
        "om", ("beta",),
        lambda b: FamilyParams((1.0, 4.0, 6.0, 4.0, 1.0), b, 1.0),
        lambda b: _ratios(b ** 4, 4 * b ** 3, 12 * b * b, 24 * b, 24.0), "Shanker and Shukla (2018), Om",
    ),
    CatalogEntry(
        "sushila", ("alpha", "mu"),
        lambda a, mu: FamilyParams((1.0, 1.0 / a), mu / a, 1.0),
        lambda a, mu: _ratios(mu, 1.0), "Shanker et al. (2013), Sushila",
    ),
    CatalogEntry(
        "gen_aradhana", ("alpha", "beta"),
        lambda a, b: FamilyParams((1.0, 2 * a, a * a), b, 1.0),
        lambda a, b: _ratios(b * b, 2 * a * b, 2 * a * a), "Welday and Shanker (2018), generalized Aradhana",
    ),
    CatalogEntry(
        "gen_lindley3", ("alpha", "lambda", "beta"),
        lambda a, lam, b: FamilyParams((a, lam), b, 1.0),
        lambda a, lam, b: _ratios(a * b, lam), "Shanker et al. (2017), three-parameter Lindley",
    ),
    CatalogEntry(
        "xgamma", ("beta",),
        lambda b: FamilyParams((1.0, 0.0, b / 2.0), b, 1.0),
        lambda b: _ratios(b, 1.0), "Sen et al. (2016), xgamma",
    ),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}


def _entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown distribution {name!r}; see list_catalog()") from None


def build_params(name: str, params: Sequence[float]) -> FamilyParams:
    """Map a catalog entry's own parameters to :class:`FamilyParams`."""
    entry = _entry(name)
    params = [float(v) for v in params]
    if len(params) != entry.arity:
        raise CatalogError(
            f"{name} takes {entry.arity} parameter(s) ({', '.join(entry.param_names)}), got {len(params)}"
        )
    for pname, v in zip(entry.param_names, params):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name}: parameter {pname} must be positive and finite, got {v!r}")
        if pname in entry.integer_params and v != int(v):
            raise DomainError(
                f"{name}: parameter {pname} must be an integer, got {v!r}; "
                "use FamilyParams directly for non-integer shapes"
            )
    return entry.build(*params)


def build_named(name: str, params: Sequence[float]) -> Family:
    """Build the named sub-model, e.g. ``build_named("lindley", [2.0])``."""
    return make_family(build_params(name, params))


def analytic_mp(name: str, params: Sequence[float]) -> tuple[float, ...]:
    """Closed-form mixing proportions of the non-zero terms."""
    entry = _entry(name)
    return entry.analytic_mp(*[float(v) for v in params])


def build_binomial(a: float, b: float, p: int, beta: float) -> Family:
    """Density proportional to ``(a + b x)^p exp(-beta x)``.

    The coefficients are ``theta_s = C(p, s) a^(p - s) b^s``, so the weights
    are proportional to ``p! / (p - m)! * (b / (a beta))^m``.
    """
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"a must be positive, got {a!r}")
    if not (math.isfinite(b) and b >= 0):
        raise DomainError(f"b must be >= 0, got {b!r}")
    if int(p) != p or p < 0:
        raise DomainError(f"p must be a nonnegative integer, got {p!r}")
    p = int(p)
    try:
        theta = tuple(float(math.comb(p, s)) * a ** (p - s) * b ** s for s in range(p + 1))
    except OverflowError:
        raise DomainError(f"binomial coefficients overflow for p={p}") from None
    if not all(math.isfinite(t) for t in theta):
        raise DomainError(f"binomial coefficients overflow for p={p}")
    return make_family(FamilyParams(theta, beta, 1.0))


def binomial_mp(a: float, b: float, p: int, beta: float) -> tuple[float, ...]:
    """Permutation-form weights ``P(p, m) (b / (a beta))^m`` normalized over ``m``."""
    ratio = b / (a * beta)
    return _ratios(*(math.perm(p, m) * ratio ** m for m in range(p + 1)))


def build_example1(beta: float) -> Family:
    """Mixture of ``GGa(2, beta, 1)`` and ``GGa(2, beta, 3)``: density ``c (1 + x^2) exp(-beta x^2)``."""
    return make_family(FamilyParams((1.0, 0.0, 1.0), beta, 2.0))


def list_catalog() -> list[tuple[str, int, str]]:
    return [(e.name, e.arity, e.reference) for e in _ENTRIES]
