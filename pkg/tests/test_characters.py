"""Tests for the character generating function and its Laurent data."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from maasskit.exact import ES_ONE, ExactScalar
from maasskit.characters import (
    AlmostHolSeries,
    CharacterParams,
    chF_expansion,
    character_value,
    d_from_dtilde,
    dtilde,
    dtilde_closed_form,
    e2_expansion,
    euler_product,
    jacobi_theta_product,
    jacobi_theta_sum,
    phi_shift_consistency,
    theta3_sum,
    theta4_sum,
    theta_eps_series,
    theta_quotient_log_derivatives,
    tr_character,
)
from maasskit.qseries import MismatchAtOrder, QSeries, coeff_extract, eta_qexp, eta_quotient


# ---------------------------------------------------------------------------
# chF and tr
# ---------------------------------------------------------------------------


def test_chf_low_order_coefficients():
    for m, n in [(4, 2), (6, 2), (3, 1), (6, 4)]:
        f = chF_expansion(m, n, 4)
        assert f.zeta_coeff(0, 0) == ES_ONE
        assert f.zeta_coeff(Fraction(1, 2), 1) == ExactScalar(Fraction(m + n))
        assert f.zeta_coeff(1, 0) == ExactScalar(Fraction((m + n) ** 2))


def test_chf_q1_coefficient_from_k1_factors():
    # the q^1 zeta^0 coefficient comes only from the k=1 factors; expand them
    # by hand: m*m (one zeta, one 1/zeta binomial) + n*n (geometric) + 2*m*n
    m, n = 5, 3
    f = chF_expansion(m, n, 2)
    assert f.zeta_coeff(1, 0) == ExactScalar(Fraction(m * m + 2 * m * n + n * n))


def test_chf_requires_m_greater_n():
    with pytest.raises(ValueError):
        chF_expansion(2, 4, 5)
    with pytest.raises(ValueError):
        CharacterParams(2, 2)


def test_chf_zeta_symmetry():
    for m, n in [(4, 2), (5, 1)]:
        f = chF_expansion(m, n, 10)
        assert f.first_mismatch(f.zeta_substitute_inverse()) is None
        for ell in range(0, 7):
            a = coeff_extract(f, ell)
            b = coeff_extract(f, -ell)
            assert a.first_mismatch(b) is None


def test_chf_zeta_degree_bound():
    f = chF_expansion(4, 2, 8)
    for k, z in f.coeffs.items():
        for j in z:
            assert abs(j) <= k  # zeta-degree at q^(k/2) is at most 2*(k/2)


def test_tr_character_basics():
    tr = tr_character(4, 2, 0, 12)
    assert tr.coeff(0) == ES_ONE
    assert tr.coeff(1) == ExactScalar(Fraction(35))  # (m+n)^2 - 1
    for ell in (1, 2, 3):
        assert tr_character(4, 2, ell, 10).first_mismatch(
            tr_character(4, 2, -ell, 10)) is None


def test_tr_character_odd_ell_half_lattice():
    tr = tr_character(4, 2, 1, 8)
    assert tr.valuation() == Fraction(1, 2)
    assert all((2 * e).denominator == 1 for e, _ in tr.terms())


# ---------------------------------------------------------------------------
# Jacobi triple product and the shifted theta sums
# ---------------------------------------------------------------------------


def test_jacobi_triple_product_exact():
    s = jacobi_theta_sum(30)
    p = jacobi_theta_product(30)
    assert min(s.trunc_exp, p.trunc_exp) >= 30
    assert s.first_mismatch(p) is None


def test_theta_sum_structure():
    s = jacobi_theta_sum(6)
    assert s.zeta_coeff(Fraction(1, 8), Fraction(1, 2)) == ExactScalar(0, 1)
    assert s.zeta_coeff(Fraction(1, 8), Fraction(-1, 2)) == ExactScalar(0, -1)
    assert s.zeta_coeff(Fraction(9, 8), Fraction(-3, 2)) == ExactScalar(0, 1)


def test_shifted_theta_sums_against_product_forms():
    # S3 = prod (1-q^r)(1+zeta q^{r-1/2})(1+1/zeta q^{r-1/2}),
    # S4 = same with minus signs; brute-force products
    from maasskit.qseries import ZetaQSeries

    T = 14
    one = ZetaQSeries.one(T)
    p3 = one
    p4 = one
    for r in range(1, T + 1):
        e = one - ZetaQSeries.monomial(1, r, 0, T)
        fp = ZetaQSeries.monomial(1, Fraction(2 * r - 1, 2), 1, T)
        fm = ZetaQSeries.monomial(1, Fraction(2 * r - 1, 2), -1, T)
        p3 = p3 * e * (one + fp) * (one + fm)
        p4 = p4 * e * (one - fp) * (one - fm)
    assert theta3_sum(T).first_mismatch(p3) is None
    assert theta4_sum(T).first_mismatch(p4) is None


def test_phi_shift_consistency_pairs():
    for m, n in [(4, 2), (6, 2), (6, 4)]:
        rep = phi_shift_consistency(m, n, 12)
        assert rep.ok and rep.order >= 12


def test_phi_shift_consistency_negative_control():
    with pytest.raises(MismatchAtOrder) as err:
        phi_shift_consistency(4, 2, 8, _eta_power_offset=1)
    assert err.value.exponent == 1  # the Euler factor first differs at q^1


# ---------------------------------------------------------------------------
# eps-series and Laurent coefficients
# ---------------------------------------------------------------------------


def test_theta_eps_parity_and_leads():
    half = theta_eps_series("at_half", 5, 8)
    star = theta_eps_series("at_zero_star", 5, 8)
    for r in (1, 3, 5):
        assert half.coeff(r).is_zero()
        assert star.coeff(r).is_zero()
    # theta(1/2) = -2 eta(2tau)^2/eta(tau)
    theta_half = half.coeff(0)
    closed = eta_quotient([(2, 2), (1, -1)], 8) * Fraction(-2)
    assert theta_half.first_mismatch(closed) is None
    # theta*(0) = theta'(0) = -2 pi eta^3
    theta_star0 = star.coeff(0)
    eta3 = eta_qexp(9)
    closed2 = (eta3 * eta3 * eta3) * ExactScalar.pi_power(1, -2)
    assert theta_star0.first_mismatch(closed2) is None


def test_dtilde_closed_forms_exact():
    for m in (4, 6, 8):
        assert dtilde(m, 2, 1, 10).first_mismatch(dtilde_closed_form(m, 2, 1, 10)) is None
    for m in (6, 8):
        assert dtilde(m, 4, 2, 10).first_mismatch(dtilde_closed_form(m, 4, 2, 10)) is None
        assert dtilde(m, 4, 1, 10).first_mismatch(dtilde_closed_form(m, 4, 1, 10)) is None


def test_dtilde_preconditions():
    with pytest.raises(ValueError):
        dtilde(5, 2, 1, 6)
    with pytest.raises(ValueError):
        dtilde(6, 4, 3, 6)


def test_e2_expansion():
    e2 = e2_expansion(1, 6)
    assert e2.coeff(0) == ES_ONE
    assert e2.coeff(1) == ExactScalar(Fraction(-24))
    assert e2.coeff(2) == ExactScalar(Fraction(-72))  # sigma_1(2) = 3
    assert e2.coeff(3) == ExactScalar(Fraction(-96))  # sigma_1(3) = 4
    e2_2 = e2_expansion(2, 6)
    assert e2_2.coeff(1).is_zero()
    assert e2_2.coeff(2) == ExactScalar(Fraction(-24))


def test_theta_quotient_log_derivatives():
    first, second = theta_quotient_log_derivatives(20)
    assert first.coeff(0) == ExactScalar(Fraction(1, 4))
    assert second.coeff(0) == ExactScalar(Fraction(1, 12))


def test_d_from_dtilde_structure():
    d2 = d_from_dtilde(4, 2, 2, 8)
    assert d2.degree == 0
    assert d2.holomorphic_part().first_mismatch(dtilde(4, 2, 1, 8)) is None
    d4 = d_from_dtilde(6, 4, 4, 8)
    assert d4.degree == 0
    assert d4.holomorphic_part().first_mismatch(dtilde(6, 4, 2, 8)) is None
    d2_4 = d_from_dtilde(6, 4, 2, 8)
    assert d2_4.degree == 1
    # D_2 = Dtilde_2 - (m-4)/(8 pi v) Dtilde_4
    want = dtilde(6, 4, 2, 8) * ExactScalar.pi_power(-1, Fraction(-(6 - 4), 8))
    assert d2_4.vpow_coeffs[1].first_mismatch(want) is None


# ---------------------------------------------------------------------------
# numeric character values
# ---------------------------------------------------------------------------


def test_character_value_matches_exact_series():
    for (m, n, ell, t) in [(4, 2, 0, 0.5), (4, 2, 1, 0.5), (2, 1, 0, 0.4)]:
        cv = character_value(m, n, ell, t, rel_tol=1e-12)
        tr = tr_character(m, n, ell, 22)
        q = math.exp(-2 * math.pi * t)
        exact = sum(float(c) * q ** float(e) for e, c in tr.terms())
        assert abs(cv.value - exact) <= 1e-12 * abs(exact)
        assert cv.rel_tail_bound <= 1e-12


def test_character_value_certificate_failure():
    from maasskit.characters import TailBoundNotCertified

    with pytest.raises(TailBoundNotCertified):
        character_value(4, 2, 0, 0.05, rel_tol=1e-300)


def test_euler_product_matches_eta():
    e = euler_product(12)
    assert e.first_mismatch(eta_qexp(12).shift(Fraction(-1, 24))) is None
