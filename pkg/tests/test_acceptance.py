"""Acceptance suite: the ten headline checks, one pass/fail line each.

Every criterion runs at its stated tolerance, pinned here.  Run with
``pytest tests/test_acceptance.py -v -s`` to see the lines as they pass.
"""

from __future__ import annotations

import math
import random
import time

import mpmath as mp
import pytest

SEED = 0x4B57


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num:2d}: {name} -- {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


# ---------------------------------------------------------------------------


def test_criterion_01_jacobi_triple_product_exact():
    from maasskit.characters import jacobi_theta_product, jacobi_theta_sum

    s = jacobi_theta_sum(30)
    p = jacobi_theta_product(30)
    bad = s.first_mismatch(p)
    _report(1, "Jacobi triple product, exact to q^30",
            bad is None and min(s.trunc_exp, p.trunc_exp) >= 30,
            "zero mismatched coefficients" if bad is None else f"mismatch at q^({bad})")


def test_criterion_02_quasimodular_closed_forms_exact():
    from maasskit.characters import dtilde, dtilde_closed_form

    cases = [(m, 2, 1) for m in (4, 6, 8)]
    # n = 4 requires m > n, so m runs over {6, 8} there
    cases += [(m, 4, j) for m in (6, 8) for j in (2, 1)]
    bad = []
    for m, n, j in cases:
        if dtilde(m, n, j, 20).first_mismatch(dtilde_closed_form(m, n, j, 20)) is not None:
            bad.append((m, n, j))
    _report(2, "closed forms of Dtilde_{2j}, exact to q^20",
            not bad, f"{len(cases)} identities exact" if not bad else f"failed: {bad}")


def test_criterion_03_generating_function_bridge_exact():
    from maasskit.characters import phi_shift_consistency

    pairs = [(4, 2), (6, 2), (6, 4)]
    for m, n in pairs:
        rep = phi_shift_consistency(m, n, 20)
        assert rep.order >= 20
    _report(3, "chF equals the shifted theta quotient, exact to q^20",
            True, f"pairs {pairs} all exact")


def test_criterion_04_higher_euler_vs_quadrature():
    from maasskit.asymptotics import (higher_euler, higher_euler_quadrature,
                                      sech_square_fourier, sech_square_fourier_quadrature)

    tol = 1e-8
    worst = 0.0
    with mp.workdps(30):
        for n in range(1, 7):
            for k in range(0, 11):
                diff = abs(higher_euler(k, n).to_real()
                           - higher_euler_quadrature(k, n, 20))
                worst = max(worst, float(diff))
        # (E1d)/(E2d): base cases against the integrals (inside the table scan,
        # n = 1 and 2 rows are exactly those identities)
        # (integraliden): closed form vs quadrature of the Fourier integral
        for z in (0.5, 1.0, 2.0):
            diff = abs(sech_square_fourier(z) - sech_square_fourier_quadrature(z, 20))
            worst = max(worst, float(diff))
            closed = 4 * z / (mp.exp(mp.pi * z) - mp.exp(-mp.pi * z))
            worst = max(worst, float(abs(sech_square_fourier(z) - closed)))
        # (tilderec) on quadrature values alone
        for n in (1, 2, 3, 4):
            for k in (0, 2, 4, 6, 8):
                lhs = higher_euler_quadrature(k, n + 2, 18)
                rhs = mp.mpf(n) / (n + 1) * higher_euler_quadrature(k, n, 18)
                if k >= 2:
                    rhs -= (mp.mpf(k * (k - 1)) / (mp.pi ** 2 * n * (n + 1))
                            * higher_euler_quadrature(k - 2, n, 18))
                worst = max(worst, float(abs(lhs - rhs)))
    _report(4, "higher Euler numbers vs quadrature oracle (k<=10, n<=6)",
            worst < tol, f"worst |exact - quadrature| = {worst:.2e} < {tol:.0e}")


def test_criterion_05_asymptotic_expansion_end_to_end():
    from maasskit.asymptotics import AsymptoticExpansion, a_coeff
    from maasskit.characters import character_value

    t0 = time.time()
    tuples = [(4, 2, 0), (4, 2, 1), (6, 4, 0), (2, 1, 0)]
    ts = (0.20, 0.10, 0.05)
    worst_factor = 1.0
    for (m, n, ell) in tuples:
        truth = {t: character_value(m, n, ell, t, rel_tol=1e-10).value for t in ts}
        for N in range(4):
            exp = AsymptoticExpansion.build(m, n, ell, N)
            errs = [abs(float(exp.eval(t)) / truth[t] - 1.0) for t in ts]
            for i in (1, 2):
                ratio = errs[i - 1] / errs[i]
                factor = max(ratio / 2 ** (N + 1), 2 ** (N + 1) / ratio)
                worst_factor = max(worst_factor, factor)
    # a_0(m, 1, ell) = 1 exactly
    a0_ok = all(a_coeff(0, m, 1, ell).to_real() == 1
                for m in (2, 4, 7) for ell in (0, 1, 3))
    elapsed = time.time() - t0
    _report(5, "asymptotic expansion vs certified character series",
            worst_factor < 1.5 and a0_ok and elapsed < 300,
            f"worst ratio-to-2^(N+1) factor {worst_factor:.3f} < 1.5, "
            f"a_0(m,1,ell) = 1 exact, {elapsed:.0f}s")


def test_criterion_06_mordell_taylor_remainder():
    from maasskit.asymptotics import intlem_errors

    ts = [0.2, 0.1, 0.05, 0.025, 0.0125]
    worst_spread = 1.0
    for ell in (0, 1):
        for N in range(0, 5):
            rows = intlem_errors(4, 2, ell, N, ts, digits=30)
            scaled = [err / t ** (N + 1) for t, err in rows]
            spread = max(scaled) / min(scaled)
            worst_spread = max(worst_spread, spread)
    _report(6, "Mordell integral Taylor remainder O(t^(N+1)) bounded",
            worst_spread < 3.0,
            f"scaled remainders stay within factor {worst_spread:.2f} as t halves 0.2 -> 0.0125")


def test_criterion_07_decomposition_identity():
    from maasskit.decomposition import (DecompositionContext, h_canonical,
                                        h_ell_contour, phiF_partial, phiP_eval)

    rng = random.Random(SEED)
    worst_dec = 0.0
    worst_per = 0.0
    taus = (mp.mpc(0, 1), mp.mpc(0.5, 1), mp.mpc(0.3, 0.8))
    for (m, n) in [(4, 2), (6, 2), (6, 4)]:
        for tau in taus:
            ctx = DecompositionContext(m, n, tau, digits=20)
            for _ in range(20):
                z = mp.mpc(rng.uniform(0.05, 0.45), rng.uniform(-0.35, 0.35))
                resid = abs(ctx.phi(z) - phiF_partial(ctx, z) - phiP_eval(ctx, z))
                worst_dec = max(worst_dec, float(resid))
            for ell in range(m - n):
                diff = abs(h_canonical(ctx, ell) - h_ell_contour(ctx, ell + m - n))
                worst_per = max(worst_per, float(diff))
    _report(7, "finite + polar decomposition of the theta quotient",
            worst_dec < 1e-6 and worst_per < 1e-8,
            f"decomposition residual {worst_dec:.2e} < 1e-6 at 180 points, "
            f"coefficient periodicity {worst_per:.2e} < 1e-8")


def test_criterion_08_transformation_suites():
    from maasskit.suites import transformation_suite

    batteries = [
        ("theta-elliptic", None),
        ("theta-modular-S", None),
        ("eta-S", None),
        ("mu-hat", None),
        ("zwegers-f", {"M": 1, "points": 3}),
        ("phi-elliptic", {"m": 4, "n": 2, "points": 4}),
        ("phi-modular", {"m": 4, "n": 2, "points": 3}),
        ("nearlyhol", {"m": 4, "n": 2, "matrices": 2}),
    ]
    worst = 0.0
    for name, params in batteries:
        rep = transformation_suite(name, params, tolerance=1e-8, digits=30, seed=SEED)
        worst = max(worst, rep["max_residual"])
    _report(8, "transformation-law batteries at 30 digits, fixed seed",
            worst < 1e-8, f"{len(batteries)} suites, worst residual {worst:.2e} < 1e-8")


def test_criterion_09_raising_operator_rewrite():
    from maasskit.decomposition import (DecompositionContext, depsilon_explicit,
                                        dop_apply_steps, rewrite_dop_rhs)
    from maasskit.complexeval import R_Ml_num

    tau = mp.mpc(0.17, 0.83)
    # j = 1: operator value against the explicit theta-type sums, full precision
    ctx = DecompositionContext(4, 2, tau, digits=28)
    worst1 = 0.0
    for ell in (0, 1):
        diff = abs(ctx.dop_R(ell, 1) - depsilon_explicit(ctx, ell))
        diff = max(diff, abs(ctx.dop_R(ell, 1) - rewrite_dop_rhs(ctx, ell, 1)))
        worst1 = max(worst1, float(diff))
    # j = 2: finite differences vs the raising-operator form, with halving
    ctx2 = DecompositionContext(6, 4, tau, digits=28)
    worst2 = 0.0
    halving_ok = True
    for ell in (0, 1):
        rhs = rewrite_dop_rhs(ctx2, ell, 2)
        rel = abs(ctx2.dop_R(ell, 2) - rhs) / abs(rhs)
        worst2 = max(worst2, float(rel))
        target = lambda eps: R_Ml_num(ctx2.M, ell, eps, ctx2.tau, ctx2.digits + 5)
        vh, vh2 = dop_apply_steps(ctx2, 3, target, h=mp.mpf("2e-3"))
        halving_ok &= abs(vh2 - rhs) < abs(vh - rhs) * 0.9 + 1e-18
    _report(9, "D_eps iterates against the raising-operator rewrite",
            worst1 < 1e-8 and worst2 < 1e-3 and halving_ok,
            f"j=1 residual {worst1:.2e} < 1e-8, j=2 relative {worst2:.2e} < 1e-3, "
            f"step-halving converges")


def test_criterion_10_completion_consistency():
    from maasskit.decomposition import DecompositionContext, phiF_hat, phiP_hat

    rng = random.Random(SEED + 1)
    worst = 0.0
    for (m, n) in [(4, 2), (6, 4)]:
        ctx = DecompositionContext(m, n, mp.mpc(0.17, 0.83), digits=24)
        for _ in range(3):
            z = mp.mpc(rng.uniform(0.08, 0.42), rng.uniform(-0.25, 0.25))
            resid = abs(phiF_hat(ctx, z) + phiP_hat(ctx, z) - ctx.phi(z))
            worst = max(worst, float(resid))
    _report(10, "completed finite + polar parts still sum to phi",
            worst < 1e-8, f"worst residual {worst:.2e} < 1e-8")
