import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from polymix.catalog import build_example1, build_named
from polymix.errors import DomainError, IntegrationError
from polymix.family import make_family
from polymix.oracle import OracleReport, check_family, integrate_over_support, monte_carlo_reliability, tail_cutoff
from polymix.quadrature import QuadratureControl, integrate


class TestIntegrate:
    @pytest.mark.parametrize("g, upper, expected", [
        (lambda x: np.exp(-x), 40.0, 1.0 - math.exp(-40.0)),
        (lambda x: x * np.exp(-x), 60.0, 1.0),
        (lambda x: np.exp(-x * x), 10.0, math.sqrt(math.pi) / 2),
    ])
    def test_examples(self, g, upper, expected):
        assert integrate(g, upper) == pytest.approx(expected, abs=1e-10)

    def test_matches_scipy_on_peaked_integrand(self):
        g = lambda x: np.exp(-((x - 3.0) / 0.01) ** 2)  # noqa: E731
        ref, _ = sp_integrate.quad(g, 0.0, 6.0, points=[3.0], epsabs=1e-13)
        assert integrate(g, 6.0) == pytest.approx(ref, abs=1e-10)

    def test_integrable_singularity_with_geometric_split(self):
        # int_0^1 x^(-1/2) dx = 2
        g = lambda x: np.where(x > 0, 1.0 / np.sqrt(np.maximum(x, 1e-300)), 0.0)  # noqa: E731
        ctl = QuadratureControl(abs_tol=1e-9)
        assert integrate(g, 1.0, ctl, geometric_levels=60) == pytest.approx(2.0, abs=1e-8)

    def test_deterministic(self):
        g = lambda x: np.sin(5 * x) ** 2 * np.exp(-x)  # noqa: E731
        assert integrate(g, 30.0) == integrate(g, 30.0)

    def test_depth_exhaustion(self):
        g = lambda x: np.sign(np.sin(1.0 / np.maximum(x, 1e-12)))  # noqa: E731
        with pytest.raises(IntegrationError):
            integrate(g, 1.0, QuadratureControl(abs_tol=1e-14, max_depth=10))

    @pytest.mark.parametrize("kwargs", [{"abs_tol": 0.0}, {"max_depth": 5}, {"tail_mass_tol": -1.0}])
    def test_control_validation(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureControl(**kwargs)


class TestTailCutoff:
    def test_exponential(self):
        f = build_named("exponential", [1.0])
        x = tail_cutoff(f, 1e-12)
        assert x >= -math.log(1e-12)
        assert x <= -math.log(1e-12) * 1.01

    def test_example1(self):
        f = build_example1(1.0)
        x = tail_cutoff(f, 1e-12)
        assert f.survival(x) < 1e-12
        assert 3.0 < x < 8.0

    @pytest.mark.parametrize("name", ["lindley", "akash", "om", "devya"])
    @pytest.mark.parametrize("mass", [1e-4, 1e-9, 1e-14])
    def test_contract(self, name, mass):
        f = build_named(name, [0.7])
        assert f.survival(tail_cutoff(f, mass)) < mass

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            tail_cutoff(build_named("lindley", [1.0]), 0.0)


class TestSupportIntegral:
    @pytest.mark.parametrize("d", [0.3, 0.5, 1.0, 2.0, 3.5])
    def test_normalization_for_various_powers(self, d):
        f = make_family(theta=[0.0, 2.0, 0.0, 1.0], beta=1.3, d=d)
        assert integrate_over_support(f, f.pdf) == pytest.approx(1.0, abs=1e-9)


class TestCheckFamily:
    def test_exponential_all_pass(self):
        reports = check_family(build_named("exponential", [1.0]))
        assert [r.quantity for r in reports][:5] == [
            "normalization", "moment(1)", "moment(2)", "moment(3)", "moment(4)"
        ]
        assert len(reports) == 10
        for r in reports:
            assert r.passed
            assert r.abs_diff < 1e-9 * max(1.0, abs(r.closed_form))

    def test_sujatha_mean(self):
        reports = {r.quantity: r for r in check_family(build_named("sujatha", [1.0]))}
        assert reports["moment(1)"].closed_form == pytest.approx(2.25, abs=1e-14)
        assert reports["moment(1)"].abs_diff < 1e-8

    def test_example1_normalization_uses_library_constant(self):
        norm = check_family(build_example1(1.0))[0]
        assert norm.quantity == "normalization" and norm.passed

    def test_reproducible(self):
        f = build_named("akshaya", [0.8])
        assert check_family(f) == check_family(f)

    def test_report_invariants(self):
        r = OracleReport.compare("x", 1.0, 1.5, 0.4)
        assert r.abs_diff == 0.5 and not r.passed
        assert OracleReport.compare("x", 1.0, math.nan, 1.0).passed is False


class TestMonteCarlo:
    def test_exponential_pair(self):
        est, se = monte_carlo_reliability(build_named("exponential", [1.0]), build_named("exponential", [2.0]),
                                          n=200_000, seed=3)
        assert abs(est - 2.0 / 3.0) < 4 * se
