"""Polynomial-weighted exponential-power mixture densities.

>>> from polymix import build_named
>>> f = build_named("lindley", [2.0])
>>> [round(w, 6) for w in f.mp]
[0.666667, 0.333333]
"""

from polymix.catalog import build_binomial, build_example1, build_named, list_catalog
from polymix.entropy import tsallis, tsallis_integer, tsallis_quadrature
from polymix.errors import (
    CatalogError,
    ConvergenceError,
    DomainError,
    IntegrationError,
    ParseError,
    PolymixError,
    TailUnderflowError,
)
from polymix.family import Family, FamilyParams, MixtureView, make_family
from polymix.oracle import OracleReport, QuadratureControl, check_family, tail_cutoff
from polymix.specfun import SeriesControl
from polymix.stress_strength import (
    StressStrengthResult,
    reliability,
    reliability_quadrature,
    reliability_series,
)

__all__ = [
    "CatalogError",
    "ConvergenceError",
    "DomainError",
    "Family",
    "FamilyParams",
    "IntegrationError",
    "MixtureView",
    "OracleReport",
    "ParseError",
    "PolymixError",
    "QuadratureControl",
    "SeriesControl",
    "StressStrengthResult",
    "TailUnderflowError",
    "build_binomial",
    "build_example1",
    "build_named",
    "check_family",
    "list_catalog",
    "make_family",
    "reliability",
    "reliability_quadrature",
    "reliability_series",
    "tail_cutoff",
    "tsallis",
    "tsallis_integer",
    "tsallis_quadrature",
]
