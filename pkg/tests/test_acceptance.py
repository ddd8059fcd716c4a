"""Acceptance criteria; each test prints one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest
from scipy import special

import closed_forms as cf
from conftest import record
from ncgamma import (CorrelatedNormalParams, Kind, McConfig, PairParams, Regime, Side,
                     coeff_c, coeff_c_product_normal, coeff_d, coeff_d_product_normal,
                     coeff_delta, coeff_gamma, integrate_pdf, mc_quantiles, pdf_asymptotic,
                     pdf_asymptotic_product_normal, pdf_asymptotic_product_normal_generic,
                     pdf_at_origin, pdf_exact, pdf_finite_series, pdf_integral,
                     quantile_numeric, run_table, table_spec)
from ncgamma.tables import round_2sf


def _relmax(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def test_criterion_1_first_table():
    t0 = time.perf_counter()
    rep = run_table(table_spec("T1"))
    dt = time.perf_counter() - t0
    s = rep.summary
    frac = s["matched"] / s["compared"]
    ok = record(1, frac >= 0.95 and dt < 10,
                f"{s['matched']}/{s['compared']} cells match to 2 s.f. ({frac:.1%}), {dt:.2f} s")
    assert ok


def _block(tid, lam, alpha):
    spec = table_spec(tid)
    idx = [i for i, r in enumerate(spec.rows)
           if (r.params.lambda1, r.params.lambda2) == lam
           and (r.params.alpha1, r.params.alpha2) == alpha]
    return run_table(table_spec(tid, rows=idx))


def test_criterion_2_high_order_tables():
    good = total = shape_ok = shape_total = 0
    for tid, x_min in (("T7", 7.5), ("T8", 30.0)):
        rep = _block(tid, (0.0, 1.0), (0.5, 0.5))
        assert len(rep.cells) == 4
        for row in rep.cells:
            for c in row:
                if c.column >= x_min:
                    total += 1
                    good += round_2sf(c.computed) == c.printed
                else:
                    # below the threshold only sign and decade are required
                    shape_total += 1
                    shape_ok += (np.sign(c.computed) == np.sign(c.printed)
                                 and abs(math.log10(abs(c.computed / c.printed))) < 1)
    ok = record(2, good == total and shape_ok == shape_total,
                f"{good}/{total} large-x cells match to 2 s.f.; "
                f"{shape_ok}/{shape_total} small-x cells agree in sign and decade")
    assert ok


def test_criterion_3_integer_shape_exactness():
    rng = np.random.default_rng(3)
    worst = 0.0
    for a1 in (1, 2, 3, 4):
        for _ in range(5):
            p = PairParams(a1, rng.uniform(0.3, 3), rng.uniform(0.4, 2.5), rng.uniform(0.4, 2.5),
                           0.0, rng.uniform(0, 3))
            x = np.sort(rng.uniform(0.05, 40, 20))
            worst = max(worst, _relmax(pdf_asymptotic(p, Side.PLUS, x, a1 - 1),
                                       pdf_finite_series(p, x)))
    ok = record(3, worst < 1e-13, f"max relative gap {worst:.2e} over 20 sets x 20 points")
    assert ok


def _random_pair(rng, kind, central):
    a1, a2 = rng.uniform(0.3, 3, 2)
    b2 = rng.uniform(0.4, 2)
    b1 = b2 * rng.uniform(1.2, 3) if kind is Kind.SUM else rng.uniform(0.4, 2.5)
    l1 = 0.0 if central else rng.uniform(0.2, 3)
    return PairParams(a1, a2, b1, b2, l1, rng.uniform(0, 3), kind)


def test_criterion_4_coefficient_closed_forms():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = 0.0
    for kind in (Kind.DIFFERENCE, Kind.SUM):
        for _ in range(50):
            p = _random_pair(rng, kind, central=False)
            q = _random_pair(rng, kind, central=True)
            pairs = [(coeff_c(1, p), cf.c1(p)), (coeff_c(2, p), cf.c2(p)),
                     (coeff_gamma(1, p), cf.gamma1(p)), (coeff_gamma(2, p), cf.gamma2(p)),
                     (coeff_d(1, q), cf.d1(q)), (coeff_d(2, q), cf.d2(q)),
                     (coeff_delta(1, q), cf.delta1(q)), (coeff_delta(2, q), cf.delta2(q))]
            worst = max(worst, max(abs(a - b) / abs(b) for a, b in pairs))
    dt = time.perf_counter() - t0
    ok = record(4, worst < 1e-12 and dt < 1,
                f"max relative gap {worst:.2e} over 50 sets x 2 kinds, {dt:.2f} s")
    assert ok


def _branch_params(rng, branch, kind):
    a1, a2 = rng.uniform(0.4, 3, 2)
    b1, b2 = rng.uniform(0.5, 2.5, 2)
    if kind is Kind.SUM and b1 < b2 * 1.1:
        b1 = b2 * rng.uniform(1.2, 2.5)
    l1, l2 = rng.uniform(0.2, 3, 2)
    if branch == "first_central":
        l1 = 0.0
    elif branch == "second_central":
        l2 = 0.0
    elif branch == "equal":
        a2, b2, l2 = a1, b1, l1
    return PairParams(a1, a2, b1, b2, l1, l2, kind)


def test_criterion_5_series_vs_integral():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    worst = {}
    cases = [(b, Kind.DIFFERENCE) for b in ("two_bessel", "first_central", "second_central",
                                              "equal")]
    cases += [(b, Kind.SUM) for b in ("two_bessel", "first_central", "second_central")]
    for branch, kind in cases:
        w = 0.0
        for _ in range(10):
            p = _branch_params(rng, branch, kind)
            scale = max(p.beta1, p.beta2)
            if kind is Kind.SUM:
                x = scale * np.array([0.3, 1.5, 4.0, 9.0, 20.0])
            else:
                x = scale * np.array([-6.0, -0.7, 0.4, 3.0, 12.0])
            w = max(w, _relmax(pdf_integral(p, x, branch=branch), pdf_exact(p, x)))
        worst[f"{kind.value}/{branch}"] = w
    dt = time.perf_counter() - t0
    top = max(worst.values())
    ok = record(5, top < 1e-8 and dt < 60,
                f"max relative gap {top:.2e} over {len(cases)} branch/kind cases "
                f"x 10 sets x 5 points, {dt:.1f} s")
    assert ok, worst


def test_criterion_6_normalization():
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(20):
        kind = Kind.DIFFERENCE if i % 2 == 0 else Kind.SUM
        while True:
            a1, a2 = rng.uniform(0.3, 3, 2)
            if a1 + a2 > 1:
                break
        p = PairParams(a1, a2, *rng.uniform(0.4, 2.5, 2), *rng.uniform(0, 3, 2), kind)
        worst = max(worst, abs(integrate_pdf(p, -math.inf, math.inf) - 1))
    ok = record(6, worst < 1e-6, f"max |total mass - 1| = {worst:.2e} over 20 sets")
    assert ok


def test_criterion_7_product_normal():
    rng = np.random.default_rng(7)
    coef_gap = 0.0
    for _ in range(20):
        rx, ry = rng.uniform(-2, 2, 2)
        rho = rng.uniform(-0.9, 0.9)
        c = CorrelatedNormalParams(rx, ry, 1, 1, rho)
        c0 = CorrelatedNormalParams(rx, -rx, 1, 1, rho)
        for l in range(11):
            a, b = coeff_c_product_normal(l, c, "hermite"), coeff_c_product_normal(l, c)
            coef_gap = max(coef_gap, abs(a - b) / max(1.0, abs(b)))
            a, b = coeff_d_product_normal(l, c0, "hermite"), coeff_d_product_normal(l, c0)
            coef_gap = max(coef_gap, abs(a - b) / max(1.0, abs(b)))
    path_gap = 0.0
    for _ in range(20):
        c = CorrelatedNormalParams(*rng.uniform(-1.5, 1.5, 2), *rng.uniform(0.5, 2, 2),
                                   rng.uniform(-0.9, 0.9), int(rng.integers(1, 6)))
        for side, x in ((Side.PLUS, np.array([3.0, 8.0, 20.0])),
                        (Side.MINUS, np.array([-3.0, -8.0, -20.0]))):
            for order in (0, 2, 5):
                path_gap = max(path_gap, _relmax(
                    pdf_asymptotic_product_normal(c, side, x, order),
                    pdf_asymptotic_product_normal_generic(c, side, x, order)))
    ok = record(7, coef_gap < 1e-11 and path_gap < 1e-12,
                f"Hermite vs Laguerre {coef_gap:.2e} (l <= 10, 20 sets); "
                f"direct vs generic path {path_gap:.2e}")
    assert ok


MC_SETS = [PairParams(0.5, 0.5, 1, 1, 0, 1),
           PairParams(2.0, 1.3, 1.5, 0.7, 1.2, 0.4),
           PairParams(0.8, 2.6, 2.0, 1.0, 0.0, 2.5),
           PairParams(1.4, 2.2, 1.7, 0.6, 1.5, 0.8, Kind.SUM),
           PairParams(3.0, 0.7, 0.9, 1.4, 2.2, 0.0, Kind.SUM)]


def test_criterion_8_monte_carlo():
    t0 = time.perf_counter()
    cfg = McConfig()
    probs = [0.5, 0.95, 0.99]
    worst_z = 0.0
    for i, p in enumerate(MC_SETS):
        est = mc_quantiles(p, probs, McConfig(cfg.n_samples, seed=100 + i))
        for pr, e in zip(probs, est):
            worst_z = max(worst_z, abs(e.value - quantile_numeric(p, pr)) / e.std_error)
    rep = run_table(table_spec("T3", rows=range(6)), cfg)
    cells = [c for row in rep.cells for c in row if c.column <= 0.995]
    within = sum(abs(c.computed - c.printed) <= 0.15 * abs(c.printed) for c in cells)
    dt = time.perf_counter() - t0
    ok = record(8, worst_z <= 4 and within == len(cells) and dt < 300,
                f"max |MC - numeric| = {worst_z:.2f} SE over 5 sets x 3 probs; "
                f"{within}/{len(cells)} first-block quantile cells within 15%; "
                f"n = {cfg.n_samples:.0e}, {dt:.0f} s")
    assert ok


def _central_origin_value(p):
    # integral of the two gamma densities against each other at a common point
    a1, a2, b1, b2 = p.alpha1, p.alpha2, p.beta1, p.beta2
    A = a1 + a2
    return math.exp(special.gammaln(A - 1) - special.gammaln(a1) - special.gammaln(a2)
                    - a1 * math.log(b1) - a2 * math.log(b2) - (A - 1) * math.log(1 / b1 + 1 / b2))


def test_criterion_9_origin():
    x = 10.0 ** -np.arange(2, 7)
    notes = []
    good = True
    for A, regime in ((0.6, Regime.POWER), (1.0, Regime.LOG), (1.4, Regime.BOUNDED)):
        for p in (PairParams(0.35 * A, 0.65 * A, 1.3, 0.8, 0.7, 0.4),
                  PairParams(0.5 * A, 0.5 * A, 1.0, 1.6, 0.0, 1.1)):
            ob = pdf_at_origin(p)
            good &= ob.regime is regime
            drift = 0.0
            for sgn, coef in ((1, ob.coefficient), (-1, ob.coefficient_negative)):
                f = pdf_exact(p, sgn * x)
                if regime is Regime.POWER:
                    est = f[-1] * x[-1] ** (1 - A)
                elif regime is Regime.LOG:
                    est = (f[-1] - f[-2]) / math.log(10)
                else:
                    est = f[-1]
                drift = max(drift, abs(est / coef - 1))
            good &= drift < 0.01
            notes.append(f"{regime.value}:{drift:.1e}")
    p = PairParams(0.6, 0.8, 1.3, 0.7)
    ob = pdf_at_origin(p)
    closed = abs(ob.exponent_or_value / _central_origin_value(p) - 1)
    good &= ob.regime is Regime.BOUNDED and closed < 1e-10
    ok = record(9, good, f"regimes and drift {', '.join(notes)}; "
                         f"central bounded value vs closed form {closed:.1e}")
    assert ok
