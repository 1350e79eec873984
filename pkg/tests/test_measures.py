import math

import numpy as np
import numpy.testing as npt
import pytest

from cartanhartogs import hartogs, jtsys, measures
from cartanhartogs.errors import ConvergenceError, DomainError

POLY1 = jtsys.make_domain(jtsys.KIND_POLYDISC, n=1)
POLY2 = jtsys.make_domain(jtsys.KIND_POLYDISC, n=2)
T22 = jtsys.make_domain(jtsys.KIND_TYPE_I, p=2, q=2)


def test_capital_f_rank_one_beta():
    # r=1, a=0, b=0: F(s) = 1 / (2 (s+1)), the Beta integral
    assert measures.capital_f(POLY1, 0.0) == pytest.approx(0.5)
    assert measures.capital_f(POLY1, 1.0) == pytest.approx(0.25)
    assert measures.capital_f(POLY1, 2.5) == pytest.approx(1.0 / 7.0)
    # r=1, b = n-1 (complex hyperbolic): F(s) = Gamma(n)Gamma(s+1)/(2 Gamma(s+n+1))
    ch3 = jtsys.hyperbolic_space(3)
    assert measures.capital_f(ch3, 0.0) == pytest.approx(2.0 / (2 * 6))
    assert measures.capital_f(ch3, 1.0) == pytest.approx(2.0 / (2 * 24))


def test_capital_f_rank_two_oracle():
    # r=2, a=2, b=0, s=0: the double integral evaluates to 1/48
    assert measures.capital_f(T22, 0.0) == pytest.approx(1.0 / 48.0)


def test_capital_f_rejects_negative_s():
    with pytest.raises(DomainError):
        measures.capital_f(POLY1, -0.5)


def test_capital_f_ratio_product_form():
    # F(1)/F(0) = prod_j (1 + (j-1) a/2) / (b + 2 + (r+j-2) a/2)
    for d in (POLY1, POLY2, T22, jtsys.hyperbolic_space(2),
              jtsys.make_domain(jtsys.KIND_TYPE_I, p=2, q=3)):
        j = np.arange(1, d.r + 1)
        want = np.prod((1 + (j - 1) * d.a / 2)
                       / (d.b + 2 + (d.r + j - 2) * d.a / 2))
        npt.assert_allclose(measures.capital_f_ratio(d, 1.0), want, rtol=1e-12)


def test_log_route_matches_direct():
    for s in (0.0, 0.7, 3.2):
        npt.assert_allclose(
            np.exp(measures.log_capital_f(2, 2, 1, s)),
            measures.capital_f(jtsys.make_domain(jtsys.KIND_TYPE_I, p=2, q=3), s),
            rtol=1e-12)


def test_selberg_quadrature_rank_one():
    for d, s in ((POLY1, 0.0), (POLY1, 2.5), (jtsys.hyperbolic_space(2), 1.0)):
        quad = measures.selberg_quadrature(d.r, d.a, d.b, s, resolution=80)
        npt.assert_allclose(quad, measures.capital_f(d, s), rtol=1e-9)


def test_selberg_quadrature_rank_two():
    quad = measures.selberg_quadrature(2, 2, 0, 0.0, resolution=120)
    npt.assert_allclose(quad, 1.0 / 48.0, rtol=1e-4)


def test_selberg_symmetrized_agrees():
    ordered = measures.selberg_quadrature(2, 2, 1, 1.0, resolution=90)
    symmetrized = measures.selberg_quadrature_symmetrized(2, 2, 1, 1.0, resolution=90)
    npt.assert_allclose(symmetrized, ordered, rtol=1e-3)


def test_selberg_auto_converges():
    val = measures.selberg_quadrature_auto(2, 2, 0, 0.0, rtol=1e-5)
    npt.assert_allclose(val, 1.0 / 48.0, rtol=1e-4)
    with pytest.raises(ConvergenceError):
        # fractional s keeps the integrand non-polynomial, so this tiny
        # resolution budget cannot reach 1e-13
        measures.selberg_quadrature_auto(2, 2, 0, 2.5, rtol=1e-13,
                                         start=8, max_resolution=16)


def test_flat_volume_exact_oracles():
    H = hartogs.make_hartogs(POLY1, 1.0)
    assert measures.flat_volume_exact(H) == pytest.approx(np.pi**2 / 2)
    H = hartogs.make_hartogs(POLY2, 2.0)
    assert measures.flat_volume_exact(H) == pytest.approx(np.pi**3 / 9)
    # complex hyperbolic: pi^(n+1) Gamma(mu+1) / Gamma(mu+n+1)
    H = hartogs.make_hartogs(jtsys.hyperbolic_space(2), 0.5)
    want = np.pi**3 * math.gamma(1.5) / math.gamma(3.5)
    assert measures.flat_volume_exact(H) == pytest.approx(want)
    # no closed form for higher-rank type-I
    assert measures.flat_volume_exact(hartogs.make_hartogs(T22, 1.0)) is None


def test_mc_volume_flat_matches_exact():
    H = hartogs.make_hartogs(POLY1, 1.0)
    est = measures.mc_volume_flat(H, 400_000, seed=7)
    assert abs(est.value - np.pi**2 / 2) < 3 * est.standard_error
    assert est.standard_error < 0.02


def test_mc_volume_deterministic():
    H = hartogs.make_hartogs(POLY2, 0.5)
    a = measures.mc_volume_flat(H, 150_000, seed=3)
    b = measures.mc_volume_flat(H, 150_000, seed=3)
    assert a.value == b.value and a.standard_error == b.standard_error
    c = measures.mc_volume_flat(H, 150_000, seed=4)
    assert c.value != a.value


def test_dual_flat_ratio_rank_one_mu_one_is_one():
    # CH^n at mu = 1 is self-dual: the ratio formula collapses to 1
    for n in (1, 2, 3):
        H = hartogs.make_hartogs(jtsys.hyperbolic_space(n), 1.0)
        npt.assert_allclose(measures.dual_flat_ratio_formula(H), 1.0, rtol=1e-12)


def test_mc_volume_dual_matches_formula():
    H = hartogs.make_hartogs(POLY1, 1.0)
    flat = measures.mc_volume_flat(H, 300_000, seed=11)
    dual = measures.mc_volume_dual(H, 300_000, seed=12)
    ratio = dual.value / flat.value
    want = measures.dual_flat_ratio_formula(H)
    se = ratio * np.hypot(dual.standard_error / dual.value,
                          flat.standard_error / flat.value)
    assert abs(ratio - want) < 3 * se


def test_duality_gap_signs():
    # LHS F(mu)/F(0) decreases, RHS mu^n/(n+1) increases: the gap changes sign
    d = POLY2
    assert measures.duality_gap(d, 1e-6) > 0
    assert measures.duality_gap(d, 2.0) < 0
    with pytest.raises(DomainError):
        measures.duality_gap(d, 0.0)


def test_duality_root_rank_one_is_one():
    for n in (1, 2, 3):
        root = measures.duality_root(jtsys.hyperbolic_space(n))
        assert abs(root - 1.0) < 1e-9


def test_duality_root_higher_rank_interior():
    for d in (POLY2, T22, jtsys.make_domain(jtsys.KIND_POLYDISC, n=3)):
        root = measures.duality_root(d)
        assert 0.0 < root < 1.0
    # frozen value for the bidisc, solved independently to high precision
    npt.assert_allclose(measures.duality_root(POLY2), 0.9078532620914,
                        atol=1e-9)


def test_gennaio_equality_iff_rank_one():
    for d, want in ((POLY1, True), (jtsys.hyperbolic_space(3), True),
                    (POLY2, False), (T22, False)):
        res = measures.gennaio_check(d)
        assert res.passed
        assert res.equality == want


def test_fit_genus_adjudication():
    # the measured exponent must match gamma = 2 + a(r-1) + b
    assert abs(measures.fit_genus(T22) - 4.0) < 1e-3
    assert abs(measures.fit_genus(POLY2) - 2.0) < 1e-3
    assert abs(measures.fit_genus(jtsys.hyperbolic_space(2)) - 3.0) < 1e-3
