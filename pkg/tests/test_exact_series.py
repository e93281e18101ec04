"""Tests for the exact coefficient ring and the truncated series engine."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from maasskit.exact import ES_ONE, ES_ZERO, ExactScalar, MixedPiPowers, PiPolynomial
from maasskit.qseries import (
    MismatchAtOrder,
    NonUnitLeadingTerm,
    QSeries,
    ZetaQSeries,
    coeff_extract,
    eta_qexp,
    eta_quotient,
    eta_product_raw,
    partition_qexp,
    series_from_json,
    series_json_dumps,
    series_json_loads,
    series_to_json,
)


# ---------------------------------------------------------------------------
# ExactScalar / PiPolynomial
# ---------------------------------------------------------------------------


def test_scalar_basics():
    x = ExactScalar.from_rational(Fraction(3, 4), Fraction(-1, 2), 2)
    y = ExactScalar.from_rational(Fraction(1, 4), Fraction(1, 2), 2)
    assert (x + y) == ExactScalar.from_rational(1, 0, 2)
    assert (x - x).is_zero()
    assert (x - x).pi_exp == 0  # canonical zero
    assert ExactScalar.i_power(2) == ExactScalar.from_rational(-1)
    assert ExactScalar.i_power(-1) == ExactScalar.from_rational(0, -1)


def test_scalar_mixed_pi_rejected():
    x = ExactScalar.pi_power(1)
    y = ExactScalar.pi_power(2)
    with pytest.raises(MixedPiPowers):
        _ = x + y
    # but adding zero always works
    assert (ES_ZERO + x) == x
    assert (y + ES_ZERO) == y


def test_scalar_inverse_exact():
    rng = random.Random(7)
    for _ in range(200):
        re = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        im = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        s = rng.randint(-3, 3)
        x = ExactScalar(re, im, s)
        if x.is_zero():
            continue
        assert x * x.inverse() == ES_ONE


def test_pi_polynomial():
    a = PiPolynomial({0: (Fraction(1, 2), 0), -2: (Fraction(1, 8), 0)})
    b = PiPolynomial({1: (Fraction(-1), 0)})
    prod = a * b
    assert prod.terms[1] == (Fraction(-1, 2), Fraction(0))
    assert prod.terms[-1] == (Fraction(-1, 8), Fraction(0))
    assert (a - a).is_zero()
    # numeric evaluation: 1/2 + 1/(8 pi^2)
    import mpmath as mp

    with mp.workdps(30):
        val = a.to_real()
        assert abs(val - (mp.mpf(1) / 2 + 1 / (8 * mp.pi**2))) < mp.mpf(10) ** -25


# ---------------------------------------------------------------------------
# QSeries ring behaviour
# ---------------------------------------------------------------------------


def _random_series(rng: random.Random, unit: bool = False) -> QSeries:
    den = rng.choice([1, 2, 3, 4, 6, 8, 12, 24])
    trunc = rng.randint(4, 9) * den
    coeffs = {}
    lo = 0 if unit else -2 * den
    for _ in range(rng.randint(1, 8)):
        k = rng.randint(lo, trunc - 1)
        coeffs[k] = ExactScalar(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    if unit:
        coeffs[0] = ExactScalar(Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2])))
    return QSeries(den, trunc, coeffs)


def test_add_identity_and_inverse():
    rng = random.Random(1)
    for _ in range(50):
        a = _random_series(rng)
        zero = QSeries.zero(trunc=10**6)
        assert (a + zero).first_mismatch(a) is None
        assert (a + (-a)).is_zero()


def test_one_minus_q_telescopes():
    one_minus_q = QSeries(1, 12, {0: ES_ONE, 1: -ES_ONE})
    geom = QSeries(1, 12, {k: ES_ONE for k in range(12)})
    prod = one_minus_q * geom
    assert prod.first_mismatch(QSeries.one(11)) is None
    assert (one_minus_q + QSeries.monomial(1, 1, trunc=12)).first_mismatch(QSeries.one(12)) is None


def test_ring_laws_random():
    rng = random.Random(2)
    for _ in range(60):
        a, b, c = (_random_series(rng) for _ in range(3))
        assert ((a + b) + c).first_mismatch(a + (b + c)) is None
        assert (a * b).first_mismatch(b * a) is None
        assert (a * (b + c)).first_mismatch(a * b + a * c) is None
        assert ((a * b) * c).first_mismatch(a * (b * c)) is None


def test_invert_two_sided_random():
    rng = random.Random(3)
    for _ in range(200):
        a = _random_series(rng, unit=True)
        inv = a.invert()
        prod = a * inv
        one = QSeries.one(10**6)
        assert prod.first_mismatch(one) is None
        back = inv.invert()
        assert back.first_mismatch(a) is None  # involution up to truncation


def test_invert_nonunit_raises():
    with pytest.raises(NonUnitLeadingTerm):
        QSeries.zero(5).invert()


def test_invert_geometric():
    one_minus_q = QSeries(1, 10, {0: ES_ONE, 1: -ES_ONE})
    inv = one_minus_q.invert()
    for k in range(9):
        assert inv.coeff(k) == ES_ONE


# ---------------------------------------------------------------------------
# eta, partitions, eta quotients
# ---------------------------------------------------------------------------


def test_eta_matches_product_oracle():
    T = 40
    oracle = eta_product_raw(T, T).shift(Fraction(1, 24))
    assert eta_qexp(T).first_mismatch(oracle) is None


def test_eta_leading_coefficient():
    assert eta_qexp(3).coeff(Fraction(1, 24)) == ES_ONE


def test_eta_pentagonal_pattern_to_200():
    e = eta_qexp(200)
    expected = {}
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            g = kk * (3 * kk - 1) // 2
            if g < 200:
                expected[Fraction(1, 24) + g] = 1 if kk % 2 == 0 else -1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    got = {e_: int(c.re) for e_, c in e.terms()}
    assert got == expected
    assert all(abs(v) == 1 for v in expected.values())


def test_eta_scale_substitution():
    e = eta_qexp(10)
    e2 = e.substitute_scale(2)
    for exp, c in e.terms():
        if 2 * exp < e2.trunc_exp:
            assert e2.coeff(2 * exp) == c


def test_eta_cubed_jacobi_pattern():
    # [q^(3/24 + k)] eta^3 = (-1)^j (2j+1) at k = j(j+1)/2, else 0; brute-force cube
    T = 30
    e = eta_qexp(T)
    cube = e * e * e
    raw = eta_product_raw(T, T)
    oracle = (raw * raw * raw).shift(Fraction(3, 24))
    assert cube.first_mismatch(oracle) is None
    for exp, c in cube.terms():
        k = exp - Fraction(1, 8)
        assert k.denominator == 1
        j = int((2 * int(k)) ** 0.5)
        while j * (j + 1) // 2 > k:
            j -= 1
        assert j * (j + 1) // 2 == k
        assert c == ExactScalar(Fraction((-1) ** j * (2 * j + 1)))


def test_partition_series_brute_force():
    # independent oracle: DP partition counts
    T = 11
    counts = [0] * T
    counts[0] = 1
    for part in range(1, T):
        for total in range(part, T):
            counts[total] += counts[total - part]
    p = partition_qexp(T)
    for k in range(T):
        assert p.coeff(k) == ExactScalar(Fraction(counts[k]))
    # and as the inverse of the eta-type product shifted back
    inv = eta_qexp(T).invert().shift(Fraction(1, 24))
    for k in range(10):
        assert inv.coeff(k) == ExactScalar(Fraction(counts[k]))


def test_eta_quotient_single():
    assert eta_quotient([(1, 1)], 12).first_mismatch(eta_qexp(12)) is None


def test_eta_quotient_theta_half():
    # eta(2 tau)^2/eta(tau) = q^(1/8)(1 + q + q^2 + ...) = -theta(1/2)/2,
    # brute-force product oracle
    T = 16
    f = eta_quotient([(2, 2), (1, -1)], T)
    assert f.valuation() == Fraction(1, 8)
    raw2 = eta_product_raw(T, T).substitute_scale(2)
    raw1 = eta_product_raw(2 * T, 2 * T)
    oracle = (raw2 * raw2 * raw1.invert()).shift(Fraction(1, 8)).truncate(T)
    assert f.first_mismatch(oracle) is None
    # leading coefficients 1 + q + ...
    assert f.coeff(Fraction(1, 8)) == ES_ONE
    assert f.coeff(Fraction(9, 8)) == ES_ONE


def test_eta_quotient_matches_cube():
    f = eta_quotient([(1, 3)], 10)
    e = eta_qexp(11)
    assert f.first_mismatch(e * e * e) is None


# ---------------------------------------------------------------------------
# ZetaQSeries
# ---------------------------------------------------------------------------


def test_zeta_polynomial_difference_of_squares():
    T = 5
    a = (ZetaQSeries.monomial(1, 0, 1, T) + ZetaQSeries.monomial(1, 0, -1, T))
    b = (ZetaQSeries.monomial(1, 0, 1, T) - ZetaQSeries.monomial(1, 0, -1, T))
    prod = a * b
    want = ZetaQSeries.monomial(1, 0, 2, T) - ZetaQSeries.monomial(1, 0, -2, T)
    assert prod.first_mismatch(want) is None


def test_zeta_extract():
    one = ZetaQSeries.one(5)
    assert coeff_extract(one, 0).first_mismatch(QSeries.one(5)) is None
    f = ZetaQSeries.monomial(1, 1, 2, 5)
    assert coeff_extract(f, 2).first_mismatch(QSeries.monomial(1, 1, trunc=5)) is None
    assert coeff_extract(f, 1).is_zero()


def test_zeta_invert_annulus():
    # (1 - zeta q)^(-1) = sum zeta^j q^j
    T = 9
    f = ZetaQSeries.one(T) - ZetaQSeries.monomial(1, 1, 1, T)
    inv = f.invert()
    for j in range(8):
        assert inv.zeta_coeff(j, j) == ES_ONE
    assert (f * inv).first_mismatch(ZetaQSeries.one(T)) is None
    with pytest.raises(NonUnitLeadingTerm):
        (ZetaQSeries.monomial(1, 0, 1, T) + ZetaQSeries.monomial(1, 0, -1, T)).invert()


def test_zeta_half_lattice():
    f = ZetaQSeries.monomial(1, Fraction(1, 8), Fraction(-1, 2), 2)
    g = f * f
    assert g.zeta_coeff(Fraction(1, 4), -1) == ES_ONE
    assert g.zden == 1  # collapses back to the integer lattice


def test_mismatch_reporting():
    a = QSeries.one(10)
    b = QSeries(1, 10, {0: ES_ONE, 3: ExactScalar(Fraction(2))})
    assert a.first_mismatch(b) == 3
    with pytest.raises(MismatchAtOrder) as err:
        a.assert_equal(b)
    assert err.value.exponent == 3


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_json_round_trip_qseries():
    f = eta_quotient([(2, 2), (1, -1)], 9)
    g = series_from_json(series_to_json(f))
    assert g == f
    assert series_json_loads(series_json_dumps(f)) == f


def test_json_round_trip_zeta():
    f = ZetaQSeries.monomial(ExactScalar(Fraction(3, 7), Fraction(-2, 5), -1),
                             Fraction(1, 8), Fraction(1, 2), 3)
    f = f + ZetaQSeries.one(3)
    g = series_from_json(series_to_json(f))
    assert g == f


def test_json_exactness_of_big_rationals():
    big = Fraction(10**40 + 1, 10**39 + 7)
    f = QSeries.monomial(ExactScalar(big, -big, 5), 2, trunc=4)
    assert series_json_loads(series_json_dumps(f)) == f
