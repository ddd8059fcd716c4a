import math

import numpy as np
import pytest
from scipy import special, stats

from ncgamma import (CorrelatedNormalParams, DomainError, Kind, PairParams, Regime,
                     SingularDensityError, from_chisquare, from_product_normal,
                     is_unimodal_at_zero, pdf_at_origin, pdf_exact, pdf_finite_series,
                     pdf_ncg)
from ncgamma.exact import pdf_method
from ncgamma.specfun import kummer_m
from conftest import rel


def random_pair(rng, kind=Kind.DIFFERENCE, lam=True):
    a1, a2 = rng.uniform(0.3, 3.0, 2)
    b1, b2 = rng.uniform(0.4, 2.5, 2)
    l1, l2 = rng.uniform(0, 2.5, 2) if lam else (0.0, 0.0)
    return PairParams(a1, a2, b1, b2, l1, l2, kind)


# ---- single non-central gamma

def test_pdf_ncg_exponential():
    assert rel(pdf_ncg(1, 1, 0, 1), math.exp(-1)) < 1e-15


def test_pdf_ncg_plain_gamma():
    a, b, x = 2.7, 1.3, 2.2
    ref = b ** -a * x ** (a - 1) * math.exp(-x / b) / math.gamma(a)
    assert rel(pdf_ncg(a, b, 0, x), ref) < 1e-14


def test_pdf_ncg_mixture_partial_sum():
    ks = np.arange(61)
    w = stats.poisson.pmf(ks, 3)
    ref = np.sum(w * stats.gamma.pdf(1.5, 2 + ks, scale=1))
    assert rel(pdf_ncg(2, 1, 3, 1.5), ref) < 1e-12


def test_pdf_ncg_zero_below_origin():
    assert pdf_ncg(2, 1, 1, -0.5) == 0.0 and pdf_ncg(2, 1, 1, 0.0) == 0.0


def test_pdf_ncg_matches_scipy_ncx2(rng):
    # beta = 2 gives a non-central chi-square with 2 alpha dof and non-centrality 2 lambda
    for _ in range(10):
        a, lam, x = rng.uniform(0.3, 4), rng.uniform(0, 6), rng.uniform(0.1, 25)
        ref = stats.ncx2.pdf(x, 2 * a, 2 * lam) if lam > 0 else stats.chi2.pdf(x, 2 * a)
        assert rel(pdf_ncg(a, 2, lam, x), ref) < 1e-10


# ---- pair parameters

def test_pair_params_validation():
    with pytest.raises(DomainError):
        PairParams(0, 1, 1, 1)
    with pytest.raises(DomainError):
        PairParams(1, 1, 1, -1)
    with pytest.raises(DomainError):
        PairParams(1, 1, 1, 1, -0.1, 0)
    assert Kind.parse("sum") is Kind.SUM and Kind.parse("diff") is Kind.DIFFERENCE


def test_from_chisquare():
    p = from_chisquare(2, 2, 0.5, 0.5, 0, 0, Kind.DIFFERENCE)
    assert p.as_tuple() == (1, 1, 1, 1, 0, 0)
    p = from_chisquare(1, 1, 1, 1, 2, 2, Kind.SUM)
    assert p.as_tuple() == (0.5, 0.5, 2, 2, 1, 1) and p.kind is Kind.SUM


def test_from_product_normal():
    p = from_product_normal(CorrelatedNormalParams(0, 0))
    assert p.as_tuple() == (0.5, 0.5, 1, 1, 0, 0)
    p = from_product_normal(CorrelatedNormalParams(1.3, 1.3, 1, 1, 0.2))
    assert p.lambda2 == 0.0
    p = from_product_normal(CorrelatedNormalParams(1, 1, 1, 1, 0.5, 2))
    assert rel(p.lambda1, 4 / 3) < 1e-15
    assert rel(p.beta1, 1.5) < 1e-15 and rel(p.beta2, 0.5) < 1e-15
    with pytest.raises(DomainError):
        CorrelatedNormalParams(0, 0, 1, 1, 1.0)


def test_chisquare_map_against_sampling():
    p = from_chisquare(3, 2, 0.7, 1.2, 1.5, 0.5)
    rng = np.random.default_rng(5)
    z = 0.7 * rng.noncentral_chisquare(3, 1.5, 200_000) - 1.2 * rng.noncentral_chisquare(2, 0.5, 200_000)
    hist, edges = np.histogram(z, bins=40, range=(-8, 8))
    mid = 0.5 * (edges[1:] + edges[:-1])
    expected = pdf_exact(p, mid) * (edges[1] - edges[0]) * z.size
    keep = expected > 50
    chi2 = np.sum((hist[keep] - expected[keep]) ** 2 / expected[keep])
    assert chi2 < stats.chi2.ppf(0.999, keep.sum())


# ---- exact density

def test_pdf_exact_against_convolution_oracle(oracles):
    for e in oracles["pdf"]:
        p = PairParams(*e["params"][:4], *e["params"][4:], kind=e["kind"])
        assert rel(pdf_exact(p, e["x"]), float(e["value"])) < 1e-12, e


def test_laplace():
    x = np.linspace(-6, 6, 25)
    assert rel(pdf_exact(PairParams(1, 1, 1, 1), x), np.exp(-np.abs(x)) / 2) < 1e-14


def test_equal_scale_sum_reduces_to_single(rng):
    for _ in range(5):
        a1, a2, b = rng.uniform(0.3, 3, 3)
        l1, l2 = rng.uniform(0, 2, 2)
        p = PairParams(a1, a2, b, b, l1, l2, Kind.SUM)
        x = np.linspace(0.2, 12, 9)
        ref = pdf_ncg(a1 + a2, b, l1 + l2, x)
        assert rel(pdf_exact(p, x), ref) < 1e-12
        assert rel(pdf_exact(p, x, method="series"), ref) < 1e-11


def test_equal_parameter_bessel_series():
    p = PairParams(0.5, 0.5, 1, 1, 1, 1)
    assert pdf_method(p) == "bessel_k_series"
    assert rel(pdf_exact(p, 5.0), pdf_exact(p, 5.0, method="series")) < 1e-10


def test_sum_is_zero_off_support():
    p = PairParams(1.5, 2, 1, 2, 0.5, 0.3, Kind.SUM)
    assert np.all(pdf_exact(p, np.array([-1.0, 0.0])) == 0)


def test_reflection(rng):
    for _ in range(10):
        p = random_pair(rng)
        x = rng.uniform(-8, 8, 6)
        assert rel(pdf_exact(p, x), pdf_exact(p.swapped(), -x)) < 1e-12


def test_variance_gamma_vs_series(rng):
    for _ in range(5):
        a, b = rng.uniform(0.4, 3), rng.uniform(0.5, 2)
        p = PairParams(a, a, b, b)
        x = np.array([0.3, 1.7, 6.0])
        assert pdf_method(p) == "variance_gamma"
        assert rel(pdf_exact(p, x), pdf_exact(p, x, method="series")) < 1e-11


def test_mckay_vs_series(rng):
    for _ in range(5):
        a = rng.uniform(0.4, 3)
        b1, b2 = rng.uniform(0.5, 2.5, 2)
        p = PairParams(a, a, b1, b2, kind=Kind.SUM)
        x = np.array([0.5, 3.0, 11.0])
        assert pdf_method(p) == "mckay"
        assert rel(pdf_exact(p, x), pdf_exact(p, x, method="series")) < 1e-11


def test_nonnegative(rng):
    for kind in (Kind.SUM, Kind.DIFFERENCE):
        for _ in range(5):
            p = random_pair(rng, kind)
            x = np.linspace(-30 if kind is Kind.DIFFERENCE else 0.01, 60, 40)
            x = x[x != 0]
            assert np.all(pdf_exact(p, x) >= 0)


def test_fixed_truncation_mode():
    p = PairParams(0.5, 0.5, 1, 1, 1, 0.5)
    x = np.array([2.5, 10.0])
    assert rel(pdf_exact(p, x, fixed_k=50), pdf_exact(p, x)) < 1e-13


# ---- finite series

def test_finite_series_single_term():
    p = PairParams(1, 0.7, 1.3, 0.8, 0, 1.1)
    x = np.array([0.5, 3.0])
    # one term: the density is proportional to exp(-x / beta1)
    f = pdf_finite_series(p, x)
    assert rel(f[1] / f[0], math.exp(-2.5 / 1.3)) < 1e-13


def test_finite_series_central(rng):
    for n in (1, 2, 3, 4):
        p = PairParams(n, rng.uniform(0.3, 3), 1.2, 0.7)
        x = np.linspace(0.2, 9, 7)
        assert rel(pdf_finite_series(p, x), pdf_exact(p, x, method="series")) < 1e-12


def test_finite_series_example():
    p = PairParams(3, 0.7, 1, 2, 0, 1.3)
    assert rel(pdf_finite_series(p, 4.0), pdf_exact(p, 4.0, method="series")) < 1e-10


def test_finite_series_negative_side():
    p = PairParams(0.8, 2, 1.1, 0.6, 0.9, 0)
    x = np.array([-3.0, -0.4])
    assert rel(pdf_finite_series(p, x), pdf_exact(p, x, method="series")) < 1e-12


def test_finite_series_preconditions():
    with pytest.raises(DomainError):
        pdf_finite_series(PairParams(1.5, 1, 1, 1), 1.0)
    with pytest.raises(DomainError):
        pdf_finite_series(PairParams(2, 1, 1, 1, 0.5, 0), 1.0)


# ---- origin

def test_origin_central_closed_form(rng):
    for _ in range(5):
        a1, a2 = rng.uniform(0.6, 3, 2)
        if a1 + a2 <= 1:
            continue
        b1, b2 = rng.uniform(0.5, 2, 2)
        ob = pdf_at_origin(PairParams(a1, a2, b1, b2))
        ref = (b1 ** -a1 * b2 ** -a2 * (1 / b1 + 1 / b2) ** (1 - a1 - a2)
               * math.gamma(a1 + a2 - 1) / (math.gamma(a1) * math.gamma(a2)))
        assert ob.regime is Regime.BOUNDED and rel(ob.exponent_or_value, ref) < 1e-12


def test_origin_one_sided_noncentrality_collapses_to_m():
    a1, a2, b1, b2, l1 = 1.3, 0.9, 1.2, 0.8, 1.7
    ob = pdf_at_origin(PairParams(a1, a2, b1, b2, l1, 0))
    A = a1 + a2
    ref = (math.exp(-l1) * b1 ** -a1 * b2 ** -a2 * (1 / b1 + 1 / b2) ** (1 - A)
           * math.gamma(A - 1) / (math.gamma(a1) * math.gamma(a2))
           * float(kummer_m(A - 1, a1, l1 * b2 / (b1 + b2))))
    assert rel(ob.exponent_or_value, ref) < 1e-12


def test_origin_laplace():
    ob = pdf_at_origin(PairParams(1, 1, 1, 1))
    assert ob.regime is Regime.BOUNDED and rel(ob.exponent_or_value, 0.5) < 1e-15
    assert rel(pdf_exact(PairParams(1, 1, 1, 1), 0.0), 0.5) < 1e-15


def test_origin_against_product_integral(oracles):
    for e in oracles["origin"]:
        ob = pdf_at_origin(PairParams(*e["params"]))
        assert rel(ob.exponent_or_value, float(e["value"])) < 1e-12


def test_origin_regimes_and_singular_error():
    assert pdf_at_origin(PairParams(0.3, 0.4, 1, 1)).regime is Regime.POWER
    assert pdf_at_origin(PairParams(0.5, 0.5, 1, 1, 1, 1)).regime is Regime.LOG
    with pytest.raises(SingularDensityError) as ei:
        pdf_exact(PairParams(0.3, 0.4, 1, 1), 0.0)
    assert ei.value.behavior.regime is Regime.POWER
    assert is_unimodal_at_zero(PairParams(0.5, 0.5, 1, 1))
    assert not is_unimodal_at_zero(PairParams(2, 2, 1, 1))


def test_power_limit_drift():
    p = PairParams(0.25, 0.35, 1.2, 0.8, 0.6, 0.4)
    ob = pdf_at_origin(p)
    x = 10.0 ** -np.arange(2, 7)
    for sgn, coef in ((1, ob.coefficient), (-1, ob.coefficient_negative)):
        ratio = pdf_exact(p, sgn * x) * x ** (1 - p.alpha1 - p.alpha2)
        assert abs(ratio[-1] / coef - 1) < 0.01


def test_sum_origin_power():
    p = PairParams(0.3, 0.4, 1.5, 1, 0.5, 0.2, Kind.SUM)
    ob = pdf_at_origin(p)
    x = 1e-6
    assert abs(pdf_exact(p, x) * x ** 0.3 / ob.coefficient - 1) < 0.01
