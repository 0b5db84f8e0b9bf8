"""Acceptance criteria 1-10, one test each; a pass/fail line per criterion is printed at the end of the run."""

import io
import math
import time

import numpy as np
import pytest
from scipy import stats

from conftest import catalog_params
from test_catalog import nonzero_mp, parameter_grid
from test_cli import GOLDEN
from test_entropy import brute_force_power_integral
from test_family import random_family
from test_stress_strength import pair_matrix

from polymix.catalog import CATALOG, analytic_mp, build_example1, build_named
from polymix.cli import main
from polymix.entropy import power_integral, tsallis_integer, tsallis_quadrature
from polymix.family import make_family
from polymix.oracle import integrate_over_support, tail_cutoff
from polymix.stress_strength import reliability, reliability_quadrature

pytestmark = pytest.mark.acceptance

SWEEP = (0.5, 1.0, 2.0)


def catalog_sweep():
    for name in sorted(CATALOG):
        for v in SWEEP:
            yield name, v, build_named(name, catalog_params(CATALOG[name], v))


def test_ac1_table_golden_mixing_proportions():
    start = time.perf_counter()
    checked = 0
    for name, entry in CATALOG.items():
        for params in parameter_grid(entry):
            np.testing.assert_allclose(nonzero_mp(build_named(name, params)), analytic_mp(name, params),
                                       rtol=0, atol=1e-12, err_msg=f"{name}{params}")
            checked += 1
    elapsed = time.perf_counter() - start
    assert len(CATALOG) == 24 and checked > 100
    assert elapsed < 1.0, f"golden suite took {elapsed:.2f}s"


def test_ac2_normalization_of_random_families():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        f = random_family(rng)
        worst = max(worst, abs(integrate_over_support(f, f.pdf) - 1.0))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 10.0, f"normalization sweep took {elapsed:.2f}s"


def test_ac3_moments_against_quadrature():
    assert build_named("sujatha", [1.0]).raw_moment(1) == pytest.approx(2.25, abs=1e-12)
    for name, v, f in catalog_sweep():
        for r in (1, 2, 3, 4):
            closed = f.raw_moment(r)
            upper = tail_cutoff(f, 1e-13 * closed, order=r)
            oracle = integrate_over_support(f, lambda x, r=r: x ** r * f.pdf(x), upper=upper,
                                            abs_tol=1e-11 * max(1.0, closed))
            assert oracle == pytest.approx(closed, rel=1e-7), f"{name}({v}) moment {r}"


def test_ac4_cdf_against_quadrature():
    for name, v, f in catalog_sweep():
        far = tail_cutoff(f, 1e-15)
        grid = np.linspace(0.0, far, 30)
        F = f.cdf(grid)
        assert F[0] == 0.0
        assert np.all(np.diff(F) >= 0.0), name
        assert F[-1] == pytest.approx(1.0, abs=1e-14)
        assert f.cdf(1e6 * far) == 1.0
        for x in grid[1:12]:
            assert abs(f.cdf(x) - integrate_over_support(f, f.pdf, upper=x)) <= 1e-8, f"{name}({v}) at {x}"


def test_ac5_stress_strength():
    start = time.perf_counter()
    for bx, by in [(1.0, 2.0), (0.5, 0.5), (3.0, 0.4)]:
        res = reliability(build_named("exponential", [bx]), build_named("exponential", [by]))
        assert res.r_series == pytest.approx(by / (bx + by), abs=1e-8)
        assert res.r_quadrature == pytest.approx(by / (bx + by), abs=1e-8)
    for name in ("lindley", "om", "gen_lindley3"):
        f = build_named(name, catalog_params(CATALOG[name], 1.0))
        res = reliability(f, f)
        assert res.r_series == pytest.approx(0.5, abs=1e-8)
        assert res.r_quadrature == pytest.approx(0.5, abs=1e-8)
    converged = 0
    for x, y in pair_matrix():
        res = reliability(x, y)
        if res.r_series is not None:
            converged += 1
            assert res.discrepancy <= 1e-6
        assert res.r_quadrature + reliability_quadrature(y, x) == pytest.approx(1.0, abs=2e-8)
    assert converged >= 15
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"stress-strength suite took {elapsed:.2f}s"


def test_ac6_tsallis_entropy():
    assert tsallis_integer(build_named("exponential", [1.0]), 2) == pytest.approx(0.5, abs=1e-14)
    assert tsallis_integer(build_named("lindley", [1.0]), 2) == pytest.approx(0.6875, abs=1e-14)
    for name, v, f in catalog_sweep():
        for alpha in (2, 3, 4):
            diff = abs(tsallis_integer(f, alpha) - tsallis_quadrature(f, float(alpha)))
            assert diff <= 1e-7, f"{name}({v}) alpha={alpha}"
    for theta in [(1.0,), (2.0, 0.5), (1.0, 0.0, 1.0), (0.3, 1.1, 0.7)]:
        for alpha in (2, 3):
            for d in (0.5, 1.0, 2.0):
                f = make_family(theta=theta, beta=1.3, d=d)
                assert power_integral(f, alpha) == pytest.approx(brute_force_power_integral(f, alpha), rel=1e-14)


def test_ac7_sampling():
    n = 10**5
    critical = stats.kstwo.ppf(1 - 1e-3, n)
    members = ["lindley", "akash", "sujatha", "amarendra", "devya", "om", "rani", "xgamma", "gen_lindley3",
               "weibull"]
    for k, name in enumerate(members):
        for v in (0.7, 2.0):
            f = build_named(name, catalog_params(CATALOG[name], v))
            values, which = f.sample_components(n, seed=1000 + 10 * k + int(v))
            assert stats.kstest(values, f.cdf).statistic < critical, f"{name}({v})"
            for i, w in enumerate(f.mp):
                freq = np.count_nonzero(which == i) / n
                assert abs(freq - w) <= 4 * math.sqrt(w * (1 - w) / n) + 1e-12, f"{name}({v}) term {i}"


def test_ac8_characteristic_function():
    for f in (build_named("lindley", [1.0]), build_example1(2.0), make_family(theta=[1.0], beta=1.0, d=0.5)):
        res = f.cf(0.0)
        assert res.value == 1 + 0j
    for beta in (0.5, 1.0, 4.0):
        f = build_named("exponential", [beta])
        for t in np.linspace(-0.49 * beta, 0.49 * beta, 9):
            res = f.cf(t, method="series")
            assert abs(res.value - beta / (beta - 1j * t)) <= 1e-8
    for name, t in [("lindley", 0.3), ("akash", 0.2), ("sujatha", 0.4)]:
        f = build_named(name, [1.0])
        series = f.cf(t, method="series").value
        quad = f.cf(t, method="quadrature").value
        assert abs(series - quad) <= 1e-7


def test_ac9_example_one_constant():
    f = build_example1(1.0)
    library_c = 4 / (3 * math.sqrt(math.pi))
    printed_c = 1.0 / (3 * math.sqrt(math.pi))  # beta^(3/2) / ((2 beta + 1) sqrt(pi)) at beta = 1
    assert f.c == pytest.approx(library_c, rel=1e-14)
    # quadrature of the unnormalized density shows which constant normalizes it
    mass = integrate_over_support(f, lambda x: (1 + x * x) * np.exp(-x * x))
    assert 1.0 / mass == pytest.approx(library_c, rel=1e-10)
    assert library_c / printed_c == pytest.approx(4.0, rel=1e-14)
    # the printed mean (beta+1) / (2 (2 beta + 1) sqrt(pi beta)) is a quarter of the closed form
    printed_mean = 2 / (6 * math.sqrt(math.pi))
    assert f.raw_moment(1) / printed_mean == pytest.approx(4.0, rel=1e-13)
    for beta in (0.5, 1.0, 3.0):
        assert build_example1(beta).mp[0] == pytest.approx(2 * beta / (2 * beta + 1), rel=1e-14)


def test_ac10_cli():
    def run(*argv):
        out, err = io.StringIO(), io.StringIO()
        return main(list(argv), out=out, err=err), out.getvalue()

    for argv, golden in [
        (["eval", "--dist", "lindley:1", "--grid", "0:5:6"], "eval_lindley_1.csv"),
        (["mp", "--dist", "lindley:1"], "mp_lindley_1.txt"),
        (["moments", "--dist", "lindley:1"], "moments_lindley_1.csv"),
    ]:
        code, out = run(*argv)
        assert code == 0 and out.encode() == (GOLDEN / golden).read_bytes()
    for name, entry in sorted(CATALOG.items()):
        spec = f"{name}:" + ",".join(str(v) for v in catalog_params(entry, 1.0))
        code, out = run("check", "--dist", spec)
        assert code == 0, f"check failed for {spec}:\n{out}"
