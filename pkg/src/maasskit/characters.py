"""Kac-Wakimoto characters as exact q-series.

This module builds the specialized character generating function

    chF(zeta, q) = prod_{k>=1} [(1+zeta q^{k-1/2})(1+zeta^{-1} q^{k-1/2})]^m
                              / [(1-zeta q^{k-1/2})(1-zeta^{-1} q^{k-1/2})]^n

expanded in the annulus |q|^{1/2} < |zeta| < |q|^{-1/2}, extracts the
specialized characters tr q^{L_0} = chF_ell * prod(1-q^k), and computes the
Laurent coefficients Dtilde_{2j} of the meromorphic theta quotient
theta(z+1/2)^m / theta(z)^n at z = 0, together with their closed
eta-quotient / E2 forms in the low pole-order cases.

Everything here is exact; the one numerical entry point,
:func:`character_value`, sums the exact integer coefficients of a
character in float arithmetic with a certified tail bound, for use by the
asymptotics comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Dict, List, Literal, Optional, Tuple

from .exact import ES_ONE, ExactScalar
from .qseries import (
    MismatchAtOrder,
    QSeries,
    ZetaQSeries,
    coeff_extract,
    eta_product_raw,
    eta_qexp,
    eta_quotient,
)

__all__ = [
    "CharacterParams",
    "chF_expansion",
    "tr_character",
    "euler_product",
    "jacobi_theta_sum",
    "jacobi_theta_product",
    "theta3_sum",
    "theta4_sum",
    "phi_shift_consistency",
    "ConsistencyReport",
    "EpsSeries",
    "theta_eps_series",
    "dtilde",
    "dtilde_closed_form",
    "e2_expansion",
    "AlmostHolSeries",
    "d_from_dtilde",
    "theta_quotient_log_derivatives",
    "character_value",
    "CharacterValue",
    "TailBoundNotCertified",
]


@dataclass(frozen=True)
class CharacterParams:
    """Parameters (m, n, ell) of a specialized character, with truncation."""

    m: int
    n: int
    ell: int = 0
    trunc: int = 40

    def __post_init__(self):
        if not (self.m > self.n >= 1):
            raise ValueError("requires m > n >= 1")

    def require_even(self) -> None:
        """Decomposition work additionally needs m, n even."""
        if self.m % 2 or self.n % 2:
            raise ValueError("requires m and n even")

    @property
    def index(self) -> Fraction:
        """Jacobi index (m - n)/2 of the associated theta quotient."""
        return Fraction(self.m - self.n, 2)


# ---------------------------------------------------------------------------
# The generating function and the specialized characters
# ---------------------------------------------------------------------------


def _annulus_factor(j_sign: int, plus: bool, power: int, k: int, T2: int) -> ZetaQSeries:
    """One factor (1 +- zeta^{+-1} q^{k-1/2})^{+-power} expanded in the annulus.

    plus=True gives the binomial expansion of (1 + x)^power; plus=False the
    geometric expansion of (1 - x)^(-power); x = zeta^{j_sign} q^{(2k-1)/2}.
    """
    delta = 2 * k - 1  # exponent of x on the half-integer lattice
    coeffs: Dict[int, Dict[int, ExactScalar]] = {}
    j = 0
    while j * delta < T2:
        if plus:
            if j > power:
                break
            c = comb(power, j)
        else:
            c = comb(j + power - 1, power - 1)
        coeffs[j * delta] = {j * j_sign: ExactScalar(Fraction(c))}
        j += 1
    return ZetaQSeries(2, T2, coeffs)


def chF_expansion(m: int, n: int, T: int) -> ZetaQSeries:
    """The character generating function modulo q^T, zeta-degree <= 2j at q^j.

    The inverse factors are expanded as geometric series, which is the
    expansion valid in the annulus |q|^{1/2} < |zeta| < |q|^{-1/2}; that
    choice pins down the coefficient functions chF_ell.
    """
    CharacterParams(m, n)
    T2 = 2 * T
    acc = ZetaQSeries.one(T2, den=2)
    for k in range(1, T + 1):
        for j_sign in (1, -1):
            acc = acc * _annulus_factor(j_sign, True, m, k, T2)
            acc = acc * _annulus_factor(j_sign, False, n, k, T2)
    return acc


def euler_product(T: int) -> QSeries:
    """prod_{k>=1} (1 - q^k) modulo q^T (pentagonal expansion)."""
    return eta_qexp(T + 1).shift(Fraction(-1, 24)).truncate(T)


def tr_character(m: int, n: int, ell: int, T: int) -> QSeries:
    """The specialized character tr q^{L_0} = chF_ell * prod(1 - q^k)."""
    return (coeff_extract(chF_expansion(m, n, T), ell) * euler_product(T)).truncate(T)


# ---------------------------------------------------------------------------
# Jacobi theta: sum form, product form, and the two shifted null sums
# ---------------------------------------------------------------------------


def jacobi_theta_sum(T: int) -> ZetaQSeries:
    """theta(z; tau) = sum_{nu in 1/2+Z} e^{pi i nu^2 tau + 2 pi i nu (z+1/2)}.

    Exact expansion on the q^(1/8), zeta^(1/2) lattice: the term for
    nu = s + 1/2 is i (-1)^s q^{nu^2/2} zeta^nu.
    """
    T8 = 8 * T
    coeffs: Dict[int, Dict[int, ExactScalar]] = {}
    s = 0
    while (2 * s + 1) ** 2 < T8:
        for nu2, sgn in (((2 * s + 1), (-1) ** s), (-(2 * s + 1), (-1) ** (-s - 1))):
            c = ExactScalar(Fraction(0), Fraction(sgn))
            coeffs.setdefault((2 * s + 1) ** 2, {})[nu2] = c
        s += 1
    return ZetaQSeries(8, T8, coeffs, zden=2)


def jacobi_theta_product(T: int) -> ZetaQSeries:
    """Triple-product form -i q^{1/8} zeta^{-1/2} prod (1-q^r)(1-zeta q^{r-1})(1-zeta^{-1} q^r)."""
    T8 = 8 * T
    acc = ZetaQSeries.monomial(ExactScalar(Fraction(0), Fraction(-1)),
                               Fraction(1, 8), Fraction(-1, 2), T)
    one = ES_ONE
    for r in range(1, T + 1):
        f1 = ZetaQSeries(1, T, {0: {0: one}, r: {0: -one}})                    # 1 - q^r
        f2 = ZetaQSeries(1, T, {0: {0: one}}) - ZetaQSeries.monomial(1, r - 1, 1, T)
        f3 = ZetaQSeries(1, T, {0: {0: one}}) - ZetaQSeries.monomial(1, r, -1, T)
        acc = acc * f1 * f2 * f3
    return acc.truncate(T + Fraction(1, 8))


def theta3_sum(T: int) -> ZetaQSeries:
    """sum_{j in Z} q^{j^2/2} zeta^j (the z -> z + tau/2 + 1/2 shift of theta,
    stripped of its elementary prefactor)."""
    T2 = 2 * T
    coeffs: Dict[int, Dict[int, ExactScalar]] = {0: {0: ES_ONE}}
    j = 1
    while j * j < T2:
        coeffs[j * j] = {j: ES_ONE, -j: ES_ONE}
        j += 1
    return ZetaQSeries(2, T2, coeffs)


def theta4_sum(T: int) -> ZetaQSeries:
    """sum_{j in Z} (-1)^j q^{j^2/2} zeta^j (the z -> z + tau/2 shift)."""
    T2 = 2 * T
    coeffs: Dict[int, Dict[int, ExactScalar]] = {0: {0: ES_ONE}}
    j = 1
    while j * j < T2:
        c = ES_ONE if j % 2 == 0 else -ES_ONE
        coeffs[j * j] = {j: c, -j: c}
        j += 1
    return ZetaQSeries(2, T2, coeffs)


@dataclass(frozen=True)
class ConsistencyReport:
    m: int
    n: int
    order: Fraction
    ok: bool = True


def phi_shift_consistency(m: int, n: int, T: int,
                          _eta_power_offset: int = 0) -> ConsistencyReport:
    """Exact check that the character generating function is the theta quotient.

    The quotient theta(z+1/2)^m / theta(z)^n, shifted by z -> z + tau/2 and
    multiplied by (-1)^m i^{-n} zeta^{(m-n)/2} q^{(m-n)/6} eta^{n-m},
    reproduces chF.  Writing both shifted thetas through the triple product
    and cancelling the elementary prefactors (the q-, zeta- and fourth-root
    factors cancel identically for even m, n), the claim becomes the exact
    two-variable identity

        chF = S3^m * S4^{-n} * E^{n-m},

    with S3, S4 the shifted theta sums above and E = prod(1-q^r); S4 is
    inverted as a ZetaQSeries, which is exactly the annulus (geometric)
    expansion of 1/theta.  ``_eta_power_offset`` deliberately miscounts the
    Euler-product power and exists for negative-control tests.

    Raises MismatchAtOrder on failure.
    """
    params = CharacterParams(m, n)
    params.require_even()
    W = T + 1  # margin: inverse powers cost a little relative precision
    lhs = chF_expansion(m, n, T)
    e = euler_product(W)
    rhs = (theta3_sum(W) ** m) * (theta4_sum(W).invert() ** n) * (e ** (n - m + _eta_power_offset))
    if rhs.trunc_exp < T:
        raise AssertionError("working order too small in phi_shift_consistency")
    bad = lhs.first_mismatch(rhs)
    if bad is not None:
        raise MismatchAtOrder(bad, f"chF vs theta-quotient mismatch at q^({bad})")
    return ConsistencyReport(m, n, Fraction(T))


# ---------------------------------------------------------------------------
# Epsilon-Taylor series of the theta factors, and the Laurent coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsSeries:
    """Taylor series in eps with QSeries coefficients (index = eps power)."""

    coeffs: Tuple[QSeries, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "EpsSeries") -> "EpsSeries":
        R = min(self.order, other.order)
        out = []
        for r in range(R + 1):
            acc: Optional[QSeries] = None
            for s in range(r + 1):
                term = self.coeffs[s] * other.coeffs[r - s]
                acc = term if acc is None else acc + term
            out.append(acc)
        return EpsSeries(tuple(out))

    def __pow__(self, e: int) -> "EpsSeries":
        if e < 1:
            raise ValueError("only positive powers")
        result = self
        for _ in range(e - 1):
            result = result * self
        return result

    def invert(self) -> "EpsSeries":
        """Taylor reciprocal; the eps^0 coefficient must be a unit QSeries."""
        a0_inv = self.coeffs[0].invert()
        out: List[QSeries] = [a0_inv]
        for r in range(1, self.order + 1):
            acc: Optional[QSeries] = None
            for s in range(1, r + 1):
                term = self.coeffs[s] * out[r - s]
                acc = term if acc is None else acc + term
            out.append(-(a0_inv * acc))
        return EpsSeries(tuple(out))

    def coeff(self, r: int) -> QSeries:
        return self.coeffs[r]


def theta_eps_series(kind: Literal["at_zero_star", "at_half"], R: int, T: int) -> EpsSeries:
    """Epsilon-Taylor expansion of theta(eps + 1/2) or theta*(eps) = theta(eps)/eps.

    Both are even functions of eps; their odd Taylor coefficients vanish
    identically and are stored as exact zero series.  The eps^r coefficient
    carries a uniform factor pi^r (pi^(r+1) for theta*), tracked exactly.
    """
    if kind not in ("at_zero_star", "at_half"):
        raise ValueError(f"unknown kind {kind!r}")
    T8 = 8 * T
    out: List[QSeries] = []
    # factorial table
    fact = [1] * (R + 2)
    for i in range(1, R + 2):
        fact[i] = fact[i - 1] * i
    for r in range(R + 1):
        coeffs: Dict[int, ExactScalar] = {}
        if r % 2 == 0:  # both targets are even in eps
            s = 0
            while (2 * s + 1) ** 2 < T8:
                key = (2 * s + 1) ** 2
                if kind == "at_half":
                    # -2 * (2 pi i)^r nu^r / r!, nu = s + 1/2, summed over +-nu (r even)
                    c = (ExactScalar.i_power(r)
                         * ExactScalar.pi_power(r, Fraction(-2 * (2 * s + 1) ** r, fact[r])))
                else:
                    # theta*/eps^r = theta^(r+1)-type term:
                    # 2 i (-1)^s (2 pi i)^{r+1} nu^{r+1} / (r+1)!
                    sign = -1 if s % 2 else 1
                    c = (ExactScalar.i_power(r + 2)
                         * ExactScalar.pi_power(r + 1,
                                                Fraction(2 * sign * (2 * s + 1) ** (r + 1),
                                                         fact[r + 1])))
                coeffs[key] = c
                s += 1
        out.append(QSeries(8, T8, coeffs))
    return EpsSeries(tuple(out))


def _two_pi_i_power(e: int) -> ExactScalar:
    """(2 pi i)^e as an ExactScalar (e may be negative)."""
    return ExactScalar.i_power(e) * ExactScalar.pi_power(e, Fraction(2) ** e)


def dtilde(m: int, n: int, j: int, T: int) -> QSeries:
    """Laurent coefficient Dtilde_{2j} of theta(eps+1/2)^m / theta(eps)^n.

    The quotient is written as eps^{-n} * A(eps)/B(eps) with
    A = theta(eps+1/2)^m and B = theta*(eps)^n, both even in eps, and
    Dtilde_{2j} is (2 pi i)^{2j} times the eps^{n-2j} Taylor coefficient
    of A/B.  Requires m, n even with m > n and 1 <= j <= n/2.
    """
    CharacterParams(m, n).require_even()
    if not (1 <= j <= n // 2):
        raise ValueError("need 1 <= j <= n/2")
    W = T + 2  # working order; the quotient loses nothing, this is margin
    R = n + 2
    A = theta_eps_series("at_half", R, W) ** m
    B = theta_eps_series("at_zero_star", R, W) ** n
    C = A * B.invert()
    c = C.coeff(n - 2 * j)
    out = c * _two_pi_i_power(2 * j)
    if out.trunc_exp < T:
        raise AssertionError("working order too small in dtilde")
    return out.truncate(T)


def e2_expansion(s: int, T: int) -> QSeries:
    """Quasimodular Eisenstein series E2(s*tau) = 1 - 24 sum sigma_1(k) q^{sk}."""
    if s < 1:
        raise ValueError("scale must be >= 1")
    sigma = [0] * T
    for d in range(1, T):
        for mult in range(d, T, d):
            sigma[mult] += d
    coeffs: Dict[int, ExactScalar] = {0: ES_ONE}
    for k in range(1, T):
        if k * s < T and sigma[k]:
            coeffs[k * s] = ExactScalar(Fraction(-24 * sigma[k]))
    return QSeries(1, T, coeffs)


def dtilde_closed_form(m: int, n: int, j: int, T: int) -> QSeries:
    """Closed eta-quotient / E2 forms of Dtilde_{2j} for n = 2 and n = 4.

    n=2:  Dtilde_2 = -2^m eta(2tau)^{2m} / eta^{m+6}
    n=4:  Dtilde_4 =  2^m eta(2tau)^{2m} / eta^{m+12}
          Dtilde_2 =  Dtilde_4 * ((-m/24 - 1/6) E2(tau) + (m/6) E2(2tau))
    """
    if n == 2 and j == 1:
        return eta_quotient([(2, 2 * m), (1, -(m + 6))], T) * Fraction(-(2 ** m))
    if n == 4 and j == 2:
        return eta_quotient([(2, 2 * m), (1, -(m + 12))], T) * Fraction(2 ** m)
    if n == 4 and j == 1:
        lead = dtilde_closed_form(m, 4, 2, T)
        combo = (e2_expansion(1, T) * Fraction(-m - 4, 24)
                 + e2_expansion(2, T) * Fraction(m, 6))
        return (lead * combo).truncate(T)
    raise ValueError("closed forms available only for n in {2, 4}")


# ---------------------------------------------------------------------------
# Almost holomorphic coefficients D_r
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlmostHolSeries:
    """A polynomial sum_j c_j(q) v^{-j} with QSeries coefficients.

    The pi-power hidden in each 1/(8 pi v) is folded into the exact
    coefficient series, so ``vpow_coeffs[j]`` multiplies v^{-j} directly.
    """

    vpow_coeffs: Tuple[QSeries, ...]

    @property
    def degree(self) -> int:
        return len(self.vpow_coeffs) - 1

    def holomorphic_part(self) -> QSeries:
        return self.vpow_coeffs[0]

    def eval_mpc(self, q, v, ctx=None):
        import mpmath as mp

        ctx = ctx or mp
        total = ctx.mpc(0)
        for j, c in enumerate(self.vpow_coeffs):
            total += c.eval_mpc(q, ctx) * ctx.power(ctx.mpf(v), -j)
        return total


def d_from_dtilde(m: int, n: int, r: int, T: int) -> AlmostHolSeries:
    """The almost holomorphic D_r: sum_j (-1)^j Dtilde_{2j+r}/j! ((m-n)/(8 pi v))^j.

    r must be even with 2 <= r <= n; the result has degree (n - r)/2 in 1/v.
    """
    CharacterParams(m, n).require_even()
    if r % 2 or not (2 <= r <= n):
        raise ValueError("need r even with 2 <= r <= n")
    out: List[QSeries] = []
    fact = 1
    for j in range(0, (n - r) // 2 + 1):
        if j > 0:
            fact *= j
        dt = dtilde(m, n, (2 * j + r) // 2, T)
        scale = ExactScalar.pi_power(-j, Fraction((-1) ** j * (m - n) ** j, 8 ** j * fact))
        out.append(dt * scale)
    return AlmostHolSeries(tuple(out))


def theta_quotient_log_derivatives(T: int) -> Tuple[QSeries, QSeries]:
    """(2 pi i)^{-2} theta''(1/2)/theta(1/2) and (2 pi i)^{-2} theta*''(0)/theta*(0).

    Returns the exact pair and asserts the Eisenstein identities

        first  = -(1/12) E2(tau) + (1/3) E2(2tau)
        second =  (1/12) E2(tau)

    raising MismatchAtOrder if either fails.
    """
    W = T + 2
    half = theta_eps_series("at_half", 2, W)
    star = theta_eps_series("at_zero_star", 2, W)
    scale = _two_pi_i_power(-2) * 2  # second derivative = 2 * eps^2 coefficient
    first = (half.coeff(2) * half.coeff(0).invert() * scale).truncate(T)
    second = (star.coeff(2) * star.coeff(0).invert() * scale).truncate(T)
    e2_1 = e2_expansion(1, T)
    e2_2 = e2_expansion(2, T)
    first.assert_equal(e2_1 * Fraction(-1, 12) + e2_2 * Fraction(1, 3),
                       "theta''(1/2)/theta(1/2)")
    second.assert_equal(e2_1 * Fraction(1, 12), "theta*''(0)/theta*(0)")
    return first, second


# ---------------------------------------------------------------------------
# Certified numeric character values (float fast path)
# ---------------------------------------------------------------------------


class TailBoundNotCertified(ArithmeticError):
    """The requested tolerance could not be certified by the tail bound."""


@dataclass(frozen=True)
class CharacterValue:
    """A numeric character value with its a-posteriori error certificate."""

    m: int
    n: int
    ell: int
    t: float
    value: float
    chf_value: float
    euler_factor: float
    order: int
    rel_tail_bound: float


def _chf_coeff_column(m: int, n: int, ell: int, S: int, qh: float):
    """Scaled coefficients [qh^s] of chF_ell for s = 0..S, by float convolution.

    Works on the identity chF = S3^m * S4^{-n} * E^{n-m} with everything
    scaled by powers of qh = q^{1/2} (entry [s, w] holds
    coefficient * qh^s), so magnitudes stay within float range.  All three
    factors have nonnegative expansions, which keeps the forward
    recurrences numerically stable.

    Two structural bounds cut the work roughly fourfold: the zeta-degree of
    every series in play is at most the q-order in half-units (entries
    beyond that stay exactly zero), and entries farther from the target
    column than the remaining q-budget S - s cannot influence the answer,
    so rows are only updated on that shrinking window.
    """
    import numpy as np

    width = 2 * S + 1
    center = S
    pad = abs(ell) + 4
    A = np.zeros((S + 1, width))
    A[0, center] = 1.0
    buf = np.empty(width)

    def lo_hi(s: int) -> Tuple[int, int]:
        half = min(s, S - s + pad)
        return center - half, center + half + 1

    # sparse theta terms (j != 0): exponent j^2 in half-units, zeta-shift +-j
    theta_js = [j for j in range(1, isqrt(S) + 1)]
    wts = [qh ** (j * j) for j in theta_js]

    # multiply by S3 = 1 + sum_{j!=0} qh^{j^2} zeta^j, m times (whole-array shifts)
    scratch = np.empty_like(A)
    for _ in range(m):
        B = A.copy()
        for j, w in zip(theta_js, wts):
            rows = S + 1 - j * j
            src = A[:rows]
            dst = scratch[:rows]
            np.multiply(src, w, out=dst)
            B[j * j:, j:] += dst[:, : width - j]
            B[j * j:, : width - j] += dst[:, j:]
        A = B

    # divide by S4 = 1 + sum_{j!=0} (-1)^j qh^{j^2} zeta^j, n times (forward solve)
    # (reads clipped to the array stay exact: entries with zeta-degree above
    # the q-order are structurally zero and never written)
    for _ in range(n):
        for s in range(1, S + 1):
            lo, hi = lo_hi(s)
            row = A[s]
            for j, w in zip(theta_js, wts):
                if j * j > s:
                    break
                sw = -w if j % 2 else w
                src = A[s - j * j]
                lo2 = max(lo, j)
                if lo2 < hi:
                    b = buf[: hi - lo2]
                    np.multiply(src[lo2 - j: hi - j], sw, out=b)
                    row[lo2:hi] -= b
                hi3 = min(hi, width - j)
                if lo < hi3:
                    b = buf[: hi3 - lo]
                    np.multiply(src[lo + j: hi3 + j], sw, out=b)
                    row[lo:hi3] -= b

    # multiply by E^{n-m} = divide by E^{m-n}; E = 1 + signed pentagonal terms
    pent: List[Tuple[int, float]] = []
    k = 1
    while k * (3 * k - 1) // 2 <= S // 2:
        for kk in (k, -k):
            g = kk * (3 * kk - 1) // 2
            if 0 < 2 * g <= S:
                pent.append((2 * g, (-1.0) ** kk * qh ** (2 * g)))
        k += 1
    for _ in range(m - n):
        for s in range(2, S + 1):
            lo, hi = lo_hi(s)
            row = A[s]
            b = buf[lo:hi]
            for ds, w in pent:
                if ds > s:
                    continue
                np.multiply(A[s - ds, lo:hi], w, out=b)
                row[lo:hi] -= b
    return A[:, center + ell].copy()


def _chf_one_log(m: int, n: int, q0: float) -> float:
    """log of chF(zeta=1, q0) = log prod (1+q0^{k-1/2})^{2m} (1-q0^{k-1/2})^{-2n}."""
    import math

    total = 0.0
    k = 1
    while True:
        x = q0 ** (k - 0.5)
        if x < 1e-18:
            break
        total += 2 * m * math.log1p(x) - 2 * n * math.log1p(-x)
        k += 1
    return total


_Q0_FRACS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


def _tail_bound_log(m: int, n: int, S: int, qh: float) -> float:
    """log of a rigorous bound on sum_{s > S} [qh^s] chF_ell * qh^s.

    Uses nonnegativity of all chF coefficients: the coefficient of
    qh^s zeta^ell is at most [qh^s] chF(zeta=1), which is at most
    chF(1, q0) / qh0^s for any qh0 in (qh, 1).  Minimized over a grid.
    """
    import math

    best = math.inf
    for frac in _Q0_FRACS:
        qh0 = qh + (1.0 - qh) * frac
        if not qh < qh0 < 1.0:
            continue
        ratio = qh / qh0
        log_g = _chf_one_log(m, n, qh0 * qh0)
        val = log_g + (S + 1) * math.log(ratio) - math.log1p(-ratio)
        best = min(best, val)
    return best


def _order_for_target(m: int, n: int, qh: float, target_log: float) -> int:
    """Smallest order S (on the qh grid) whose tail bound is below target_log."""
    import math

    best = None
    for frac in _Q0_FRACS:
        qh0 = qh + (1.0 - qh) * frac
        if not qh < qh0 < 1.0:
            continue
        ratio = qh / qh0
        log_g = _chf_one_log(m, n, qh0 * qh0)
        need = (target_log - log_g + math.log1p(-ratio)) / math.log(ratio) - 1.0
        S = max(8, int(math.ceil(need)))
        best = S if best is None else min(best, S)
    if best is None:
        raise TailBoundNotCertified("no admissible comparison point q0")
    return best


def character_value(m: int, n: int, ell: int, t: float,
                    rel_tol: float = 1e-9) -> CharacterValue:
    """tr q^{L_0} at tau = i t, by certified summation of the exact q-expansion.

    The chF_ell coefficients (nonnegative integers) are accumulated in
    float arithmetic to an order S chosen so that the rigorous geometric
    tail bound is below ``rel_tol`` times the partial sum; the Euler factor
    prod(1 - q^k) is then applied as a numeric product.  Raises
    :class:`TailBoundNotCertified` if no feasible order exists.
    """
    import math

    CharacterParams(m, n, ell)
    if t <= 0:
        raise ValueError("t must be positive")
    if rel_tol < 1e-13:
        raise TailBoundNotCertified(
            "requested tolerance below what float accumulation can certify")
    qh = math.exp(-math.pi * t)
    q = qh * qh

    # Cheap first pass to estimate the magnitude of the answer, then one
    # right-sized pass; the certificate below is always a posteriori, so the
    # estimate only affects performance, never correctness.
    S = 256
    col = _chf_coeff_column(m, n, ell, S, qh)
    chf_val = float(col.sum())
    tail = math.exp(_tail_bound_log(m, n, S, qh))
    for _ in range(8):
        if chf_val > 0 and tail <= rel_tol * chf_val:
            break
        target = math.log(rel_tol) + (math.log(chf_val) if chf_val > 0 else 0.0)
        S = max(int(1.05 * _order_for_target(m, n, qh, target)) + 8, int(S * 1.2))
        if S > 5000:
            raise TailBoundNotCertified(
                f"no feasible truncation order for t={t}, rel_tol={rel_tol}")
        col = _chf_coeff_column(m, n, ell, S, qh)
        chf_val = float(col.sum())
        tail = math.exp(_tail_bound_log(m, n, S, qh))
    else:
        raise TailBoundNotCertified(
            f"tail bound stuck above tolerance at order {S} for t={t}")

    euler = 1.0
    k = 1
    while True:
        x = q ** k
        if x < 1e-19:
            break
        euler *= 1.0 - x
        k += 1
    value = chf_val * euler
    return CharacterValue(m=m, n=n, ell=ell, t=t, value=value, chf_value=chf_val,
                          euler_factor=euler, order=S,
                          rel_tail_bound=tail / chf_val)
