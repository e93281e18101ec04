"""Tests for the arbitrary-precision evaluators and their laws."""

from __future__ import annotations

import random

import mpmath as mp
import pytest

from maasskit.complexeval import (
    E_num,
    InconsistentMultiplier,
    ModularMatrix,
    PoleOnLattice,
    Precision,
    R_Ml_num,
    R_num,
    TauPoint,
    eta_num,
    f_M_num,
    f_hat_num,
    kronecker_symbol,
    lattice_distance,
    mu_hat_num,
    mu_num,
    phi_num,
    psi_num,
    slash_num,
    theta_ab_num,
    theta_num,
    theta_prime0_num,
)

TAU = mp.mpc("0.22", "1.07")
Z = mp.mpc("0.31", "0.17")


def setup_module():
    mp.mp.dps = 30


def test_tau_point_validation():
    with pytest.raises(ValueError):
        TauPoint(0.0, -1.0)
    assert TauPoint.of(TAU).v == pytest.approx(1.07)


def test_modular_matrix():
    g = ModularMatrix(1, 1, 2, 3)
    assert g.is_gamma0_2
    with pytest.raises(ValueError):
        ModularMatrix(1, 1, 1, 1)
    prod = g * g.inverse()
    assert (prod.a, prod.b, prod.c, prod.d) == (1, 0, 0, 1)
    rng = random.Random(5)
    for _ in range(10):
        w = ModularMatrix.gamma0_2_word(rng)
        assert w.c % 2 == 0 and w.c > 0
        assert w.a * w.d - w.b * w.c == 1


def test_theta_zero_and_prime():
    assert abs(theta_num(0, TAU)) < 1e-25
    # theta'(0) = -2 pi eta^3
    assert abs(theta_prime0_num(TAU) + 2 * mp.pi * eta_num(TAU) ** 3) < 1e-25


def test_theta_window_doubling_consistency():
    # recomputing at higher precision (larger windows) agrees: tails certified
    a = theta_num(Z, TAU, 20)
    b = theta_num(Z, TAU, 40)
    assert abs(a - b) < 1e-19


def test_lattice_distance_small_v():
    tau = mp.mpc("0.3888888888888", "0.0555555555")
    d = lattice_distance(mp.mpc(0), tau, exclude_origin=True)
    # 3 tau - 1 is closer than tau and 1
    assert d < 0.25
    assert abs(d - abs(3 * tau - 1)) < 1e-12


def test_eta_against_product():
    q = mp.expjpi(2 * TAU)
    prod = mp.expjpi(TAU / 12)
    for k in range(1, 200):
        prod *= 1 - q ** k
    assert abs(eta_num(TAU) - prod) < 1e-28


def test_theta_ab_lattice_shift_invariance():
    for a, b in [(1, 0), (2, 1), (3, -2)]:
        x = theta_ab_num(a, b, Z, TAU)
        y = theta_ab_num(a, b + 2 * a, Z, TAU)
        z2 = theta_ab_num(a, b - 4 * a, Z, TAU)
        assert abs(x - y) < 1e-25 and abs(x - z2) < 1e-25


def test_E_num_odd_and_zero():
    assert E_num(0) == 0
    for z in (mp.mpf("0.37"), mp.mpc("0.2", "0.4")):
        assert abs(E_num(-z) + E_num(z)) < 1e-28
    # against direct quadrature of the defining integral
    z = mp.mpf("0.8")
    direct = 2 * mp.quad(lambda t: mp.exp(-mp.pi * t * t), [0, z])
    assert abs(E_num(z) - direct) < 1e-25


def test_R_window_consistency():
    a = R_num(Z, TAU, 18)
    b = R_num(Z, TAU, 36)
    assert abs(a - b) < 1e-17


def test_mu_pole_guard():
    with pytest.raises(PoleOnLattice):
        mu_num(TAU + 1, Z, TAU)
    with pytest.raises(PoleOnLattice):
        mu_num(Z, 2 * TAU - 3, TAU)


def test_mu_hat_symmetry_and_S():
    z1, z2 = Z, mp.mpc("-0.12", "0.26")
    assert abs(mu_hat_num(z1, z2, TAU) - mu_hat_num(z2, z1, TAU)) < 1e-25
    psiS = psi_num(ModularMatrix.S())
    lhs = mu_hat_num(z1 / TAU, z2 / TAU, -1 / TAU)
    rhs = (psiS ** -3 * mp.sqrt(TAU) * mp.expjpi(-(z1 - z2) ** 2 / TAU)
           * mu_hat_num(z1, z2, TAU))
    assert abs(lhs - rhs) < 1e-25


def test_mu_hat_elliptic():
    z1, z2 = Z, mp.mpc("-0.12", "0.26")
    base = mu_hat_num(z1, z2, TAU)
    lhs = mu_hat_num(z1 + TAU, z2, TAU)
    assert abs(lhs + mp.expjpi(TAU + 2 * (z1 - z2)) * base) < 1e-25
    # full (r1,s1,r2,s2) = (1,1,1,0): factor (-1)^3 e^0
    lhs = mu_hat_num(z1 + TAU + 1, z2 + TAU, TAU)
    assert abs(lhs + base) < 1e-25


def test_f_hat_transformations():
    w = mp.mpc("0.13", "0.21")
    z = mp.mpc("0.4", "-0.09")
    for M in (1, 2):
        base = f_hat_num(w, z, TAU, M)
        lhs = f_hat_num(w, z + TAU, TAU, M)
        assert abs(lhs - mp.expjpi(-2 * M * (TAU + 2 * z)) * base) < 1e-22
        lhs = f_hat_num(w + TAU, z, TAU, M)
        assert abs(lhs - mp.expjpi(2 * M * (TAU + 2 * w)) * base) < 1e-22
        lhs = f_hat_num(w / TAU, z / TAU, -1 / TAU, M)
        rhs = TAU * mp.expjpi(2 * M * (z * z - w * w) / TAU) * base
        assert abs(lhs - rhs) < 1e-20


def test_f_M_pole_guard():
    with pytest.raises(PoleOnLattice):
        f_M_num(Z, Z + 2 * TAU + 1, TAU, 1)


def test_psi_multiplier():
    assert abs(psi_num(ModularMatrix.T(1)) - mp.expjpi(mp.mpf(1) / 12)) < 1e-25
    assert abs(psi_num(ModularMatrix.T(5)) - mp.expjpi(mp.mpf(5) / 12)) < 1e-25
    assert abs(psi_num(ModularMatrix.S()) - mp.expjpi(mp.mpf(-1) / 4)) < 1e-25
    rng = random.Random(3)
    for _ in range(6):
        g = ModularMatrix.gamma0_2_word(rng, max_entry=20)
        psi = psi_num(g)
        assert abs(psi ** 24 - 1) < 1e-24
    # eta transformation consistency: eta(gamma tau) = psi (c tau+d)^(1/2) eta(tau)
    g = ModularMatrix(1, 0, 2, 1)
    psi = psi_num(g)
    lhs = eta_num(g.act(TAU))
    rhs = psi * mp.sqrt(g.j_factor(TAU)) * eta_num(TAU)
    assert abs(lhs - rhs) < 1e-25


def test_kronecker_symbol():
    # against Jacobi-symbol table values
    assert kronecker_symbol(1, 1) == 1
    assert kronecker_symbol(2, 15) == 1
    assert kronecker_symbol(7, 15) == -1
    assert kronecker_symbol(-1, 3) == -1
    assert kronecker_symbol(-1, 5) == 1
    assert kronecker_symbol(2, 7) == 1
    assert kronecker_symbol(2, 3) == -1
    assert kronecker_symbol(4, 6) == 0
    # multiplicativity in the top argument
    for a in range(-6, 7):
        for b in range(-6, 7):
            for n in (3, 5, 7, 15):
                assert (kronecker_symbol(a * b, n)
                        == kronecker_symbol(a, n) * kronecker_symbol(b, n))


def test_epsilon_d_and_slash():
    from maasskit.complexeval import _epsilon_d

    assert _epsilon_d(1) == 1 and _epsilon_d(5) == 1
    assert _epsilon_d(3) == mp.mpc(0, 1) and _epsilon_d(7) == mp.mpc(0, 1)
    # kappa = 0: slash is composition
    g = ModularMatrix(1, 1, 2, 3)
    f = lambda t: eta_num(t, 25)
    assert abs(slash_num(f, 0, g, TAU, 25) - f(g.act(TAU))) < 1e-22
    # weight-(1/2) slash of eta against the explicit multiplier, modulus level
    val = slash_num(f, mp.mpf(1) / 2, g, TAU, 25)
    assert abs(abs(val) - abs(eta_num(TAU, 25))) < 1e-20


def test_slash_cocycle_modulus():
    g1 = ModularMatrix(1, 0, 2, 1)
    g2 = ModularMatrix(1, 1, 0, 1)
    f = lambda t: eta_num(t, 25) ** 4
    lhs = slash_num(f, 2, g1 * g2, TAU, 25)
    inner = lambda t: slash_num(f, 2, g1, t, 25)
    rhs = slash_num(inner, 2, g2, TAU, 25)
    assert abs(abs(lhs) - abs(rhs)) < 1e-20


def test_phi_num_pole_guard_and_value():
    with pytest.raises(PoleOnLattice):
        phi_num(TAU - 2, TAU, 4, 2)
    # phi(z) = theta(z+1/2)^m / theta(z)^n by construction
    val = phi_num(Z, TAU, 4, 2)
    want = theta_num(Z + mp.mpf(1) / 2, TAU) ** 4 / theta_num(Z, TAU) ** 2
    assert abs(val - want) < 1e-22 * (1 + abs(want))


def test_R_Ml_vs_R_bridge():
    # the level-raising rewrite of R_{M,ell} in terms of R, full precision
    for M, ell in [(1, 0), (2, 1), (2, 3)]:
        eps = mp.mpf("0.021")
        lhs = R_Ml_num(M, ell, eps, TAU)
        pref = -1j * mp.expjpi(-mp.mpf((ell - M) ** 2) * TAU / (2 * M)
                               + 2 * (M - ell) * eps)
        rhs = pref * R_num(2 * M * eps - (M - ell) * TAU - mp.mpf(1) / 2, 2 * M * TAU)
        assert abs(lhs - rhs) < 1e-24


def test_precision_gaussian_window():
    p = Precision(20)
    n = p.gaussian_window(1.0, drift=2.0)
    assert n >= 2 + (20 + 1) ** 0.5  # sanity: grows with digits
    with pytest.raises(Exception):
        p.gaussian_window(0.0)
