"""Higher Euler numbers and the explicit character asymptotics.

The small-t behaviour of the specialized characters is governed by moments
of powers of sech,

    E~_{k,n} = integral over R of x^k / cosh(pi x)^n dx,

computed here two independent ways: exactly, from Euler-number and
Bernoulli-polynomial base cases chained through the two-step recurrence

    E_{k,n+2} = n/(n+1) E_{k,n} - k(k-1)/(pi^2 n(n+1)) E_{k-2,n},

and numerically, by adaptive quadrature of the rapidly decaying integrand.
The exact values mix distinct powers of pi for n >= 3, so they are carried
as :class:`~maasskit.exact.PiPolynomial`.

On top of the table sit the expansion coefficients

    a_r(m,n,ell) = (-pi)^r sum_k C(r,k) (m-n)^k (2 i ell)^{r-k} E_{k+r,n}

(always real: only even k+r contributes and the i-powers collapse to a
sign), the Mordell-type integral I_ell(t) whose Taylor coefficients they
are, and the evaluation of the truncated asymptotic expansion

    e^{pi t (n-m+1)/12 + pi (m+2n-1)/(12 t)} sqrt(t)/2^n sum_r a_r t^r/r! .

Base-case convention: with E_k the *classical* Euler numbers
(E_0 = 1, E_2 = -1, E_4 = 5, ..., given by 2^k E_k(1/2)), the identity
E_{k,1} = (-2i)^{-k} E_k matches the quadrature for all k, including odd k
where both sides vanish; the value E_k(0) of the Euler polynomial at 0
does not (it is nonzero for odd k while the odd moment integral is zero).
The quadrature oracle is the ground truth for this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Tuple

import mpmath as mp

from .exact import ExactScalar, PiPolynomial

__all__ = [
    "bernoulli_poly",
    "euler_poly",
    "bernoulli_number",
    "euler_number",
    "HigherEulerTable",
    "higher_euler",
    "higher_euler_quadrature",
    "sech_square_fourier",
    "sech_square_fourier_quadrature",
    "a_coeff",
    "AsymptoticExpansion",
    "asymptotic_eval",
    "mordell_quadrature",
    "intlem_errors",
    "QuadratureNotConverged",
]


class QuadratureNotConverged(ArithmeticError):
    """The requested quadrature precision could not be certified."""


# ---------------------------------------------------------------------------
# Bernoulli / Euler polynomials (exact rational coefficients)
# ---------------------------------------------------------------------------

_bernoulli_cache: List[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2 (generating function x e^{zx}/(e^x - 1) at z=0)."""
    while len(_bernoulli_cache) <= k:
        j = len(_bernoulli_cache)
        # sum_{i=0}^{j} C(j+1, i) B_i = 0 for j >= 1
        acc = Fraction(0)
        for i in range(j):
            acc += comb(j + 1, i) * _bernoulli_cache[i]
        _bernoulli_cache.append(-acc / (j + 1))
    return _bernoulli_cache[k]


def bernoulli_poly(k: int) -> List[Fraction]:
    """Coefficients [c_0, ..., c_k] of B_k(z), ascending powers."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = [Fraction(0)] * (k + 1)
    for i in range(k + 1):
        out[k - i] = comb(k, i) * bernoulli_number(i)
    return out


_euler_poly_cache: List[List[Fraction]] = [[Fraction(1)]]


def euler_poly(k: int) -> List[Fraction]:
    """Coefficients of the Euler polynomial E_k(z), ascending powers.

    From 2 e^{xz}/(e^x + 1): E_k(z) = z^k - (1/2) sum_{i<k} C(k,i) E_i(z).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    while len(_euler_poly_cache) <= k:
        j = len(_euler_poly_cache)
        out = [Fraction(0)] * (j + 1)
        out[j] = Fraction(1)
        for i in range(j):
            ci = _euler_poly_cache[i]
            w = Fraction(comb(j, i), 2)
            for p, c in enumerate(ci):
                out[p] -= w * c
        _euler_poly_cache.append(out)
    return _euler_poly_cache[k]


def _poly_eval(coeffs: List[Fraction], z: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def euler_number(k: int) -> Fraction:
    """Classical Euler numbers E_k = 2^k E_k(1/2); zero for odd k."""
    return (2 ** k) * _poly_eval(euler_poly(k), Fraction(1, 2))


# ---------------------------------------------------------------------------
# Higher Euler numbers (exact)
# ---------------------------------------------------------------------------


def _higher_euler_base(k: int, n: int) -> PiPolynomial:
    if n == 1:
        # (-2i)^{-k} E_k, with E_k the classical Euler numbers
        e = euler_number(k)
        if e == 0:
            return PiPolynomial()
        scale = ExactScalar.i_power(-k) * ExactScalar.from_rational(Fraction(1, (-2) ** k))
        return PiPolynomial.from_scalar(scale * ExactScalar.from_rational(e))
    if n == 2:
        # (2 i^{-k} / pi) B_k(1/2)
        b = _poly_eval(bernoulli_poly(k), Fraction(1, 2))
        if b == 0:
            return PiPolynomial()
        scale = ExactScalar.i_power(-k) * ExactScalar.pi_power(-1, 2)
        return PiPolynomial.from_scalar(scale * ExactScalar.from_rational(b))
    raise ValueError("base cases are n = 1, 2")


@dataclass
class HigherEulerTable:
    """Exact table of the sech-moment numbers E_{k,n}, built by recurrence.

    Entries vanish for odd k; n=1 entries are rational (pi-power 0), n=2
    entries carry pi^{-1}, higher n mixes powers of pi.
    """

    max_k: int
    max_n: int
    entries: Dict[Tuple[int, int], PiPolynomial] = None
    consistent: bool = False

    def __post_init__(self):
        table: Dict[Tuple[int, int], PiPolynomial] = {}
        for n in (1, 2):
            if n > self.max_n:
                continue
            for k in range(self.max_k + 1):
                table[(k, n)] = _higher_euler_base(k, n)
        # E_{k,n+2} = n/(n+1) E_{k,n} - k(k-1)/(pi^2 n(n+1)) E_{k-2,n}.
        # The sign of the second term is forced by the quadrature oracle
        # (and by redoing the integration by parts: int x^k (sech^n)'' dx
        # = +k(k-1) int x^{k-2} sech^n dx enters with an overall minus).
        inv_pi2 = ExactScalar.pi_power(-2)
        for n in range(1, self.max_n - 1):
            for k in range(self.max_k + 1):
                prev = table[(k, n)] * Fraction(n, n + 1)
                if k >= 2:
                    prev = prev - table[(k - 2, n)] * (
                        inv_pi2 * ExactScalar.from_rational(Fraction(k * (k - 1), n * (n + 1))))
                table[(k, n + 2)] = prev
        self.entries = table
        odd_vanish = all(table[(k, n)].is_zero()
                         for n in range(1, self.max_n + 1)
                         for k in range(1, self.max_k + 1, 2))
        base1_rational = all(set(table[(k, 1)].terms) <= {0}
                             for k in range(0, self.max_k + 1, 2))
        base2_invpi = self.max_n < 2 or all(set(table[(k, 2)].terms) <= {-1}
                                            for k in range(0, self.max_k + 1, 2))
        self.consistent = odd_vanish and base1_rational and base2_invpi

    def value(self, k: int, n: int) -> PiPolynomial:
        if k < 0:
            return PiPolynomial()
        return self.entries[(k, n)]


_table_cache: Dict[Tuple[int, int], HigherEulerTable] = {}


def _table(max_k: int, max_n: int) -> HigherEulerTable:
    mk = max(max_k, 16)
    mn = max(max_n, 6)
    key = (mk, mn)
    if key not in _table_cache:
        _table_cache[key] = HigherEulerTable(mk, mn)
    return _table_cache[key]


def higher_euler(k: int, n: int) -> PiPolynomial:
    """Exact E_{k,n}; zero for k < 0 by convention."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 0:
        return PiPolynomial()
    return _table(k, n).value(k, n)


# ---------------------------------------------------------------------------
# Quadrature oracles
# ---------------------------------------------------------------------------


def _sech_moment_cutoff(k: int, n: int, digits: int) -> float:
    """L with x^k sech(pi x)^n negligible beyond L at the working precision."""
    target = (digits + 2) * mp.log(10)
    L = mp.mpf(2)
    for _ in range(60):
        val = n * (mp.pi * L - mp.log(2)) - k * mp.log(L)
        if val > target:
            break
        L += 1
    return L


def higher_euler_quadrature(k: int, n: int, digits: int = 25):
    """E~_{k,n} = integral of x^k / cosh(pi x)^n over R, by adaptive quadrature.

    Odd k gives exactly zero (odd integrand).  The interval [-L, L] is
    chosen so the dropped tail is below the target precision, and a
    doubled-L evaluation must agree; otherwise QuadratureNotConverged.
    """
    if k < 0 or n < 1:
        raise ValueError("need k >= 0, n >= 1")
    if k % 2 == 1:
        return mp.mpf(0)
    with mp.workdps(digits + 10):
        L = _sech_moment_cutoff(k, n, digits)
        f = lambda x: x ** k / mp.cosh(mp.pi * x) ** n
        val = 2 * mp.quad(f, [0, L / 4, L])
        check = 2 * mp.quad(f, [0, L / 2, 2 * L])
        if abs(val - check) > mp.mpf(10) ** (-digits) * (1 + abs(val)):
            raise QuadratureNotConverged(
                f"sech moment (k={k}, n={n}) unstable under interval doubling")
    return +val


def sech_square_fourier(z, digits: int = 25):
    """The Fourier transform of sech^2: integral of e^{2 pi i z x} sech(pi x)^2 dx.

    Closed form 4z / (e^{pi z} - e^{-pi z}) for real z != 0, with the
    removable value 2/pi at z = 0.
    """
    with mp.workdps(digits + 5):
        z = mp.mpf(z)
        if z == 0:
            return 2 / mp.pi
        val = 2 * z / mp.sinh(mp.pi * z)
    return +val


def sech_square_fourier_quadrature(z, digits: int = 25):
    """Quadrature side of the sech^2 Fourier identity (test oracle)."""
    with mp.workdps(digits + 10):
        z = mp.mpf(z)
        L = _sech_moment_cutoff(0, 2, digits + int(abs(z)) + 2)
        f = lambda x: mp.cos(2 * mp.pi * z * x) / mp.cosh(mp.pi * x) ** 2
        val = 2 * mp.quad(f, [0, L / 4, L])
    return +val


# ---------------------------------------------------------------------------
# Expansion coefficients and evaluation
# ---------------------------------------------------------------------------


def a_coeff(r: int, m: int, n: int, ell: int) -> PiPolynomial:
    """a_r(m,n,ell) = (-pi)^r sum_k C(r,k) (m-n)^k (2 i ell)^{r-k} E_{k+r,n}.

    Exact, and always real: E_{k+r,n} vanishes for odd k+r, so only
    k = r (mod 2) contributes and i^{r-k} is a sign.
    """
    if r < 0 or not m > n >= 1:
        raise ValueError("need r >= 0 and m > n >= 1")
    acc = PiPolynomial()
    for k in range(r + 1):
        e = higher_euler(k + r, n)
        if e.is_zero():
            continue
        zl = ExactScalar.i_power(r - k) * ExactScalar.from_rational(
            Fraction(comb(r, k) * (m - n) ** k * (2 * ell) ** (r - k)))
        acc = acc + e * zl
    out = acc * PiPolynomial({r: (Fraction((-1) ** r), Fraction(0))})
    if not out.is_real():
        raise AssertionError(f"a_{r}({m},{n},{ell}) acquired an imaginary part")
    return out


@dataclass(frozen=True)
class AsymptoticExpansion:
    """The truncated small-t expansion of tr q^{L_0} at tau = i t.

    value(t) = e^{pi t A + pi B / t} * sqrt(t)/2^n * sum_{r<=N} a_r t^r / r!
    with A = (n-m+1)/12 and B = (m+2n-1)/12.
    """

    m: int
    n: int
    ell: int
    order: int
    coeffs: Tuple[PiPolynomial, ...]

    @property
    def growth_exponent(self) -> Fraction:
        return Fraction(self.m + 2 * self.n - 1, 12)

    @property
    def decay_exponent(self) -> Fraction:
        return Fraction(self.n - self.m + 1, 12)

    @staticmethod
    def build(m: int, n: int, ell: int, order: int) -> "AsymptoticExpansion":
        coeffs = tuple(a_coeff(r, m, n, ell) for r in range(order + 1))
        return AsymptoticExpansion(m, n, ell, order, coeffs)

    def series_sum(self, t, digits: int = 30):
        with mp.workdps(digits + 5):
            t = mp.mpf(t)
            total = mp.mpf(0)
            fact = mp.mpf(1)
            for r, c in enumerate(self.coeffs):
                if r:
                    fact *= r
                total += c.to_real() * t ** r / fact
        return +total

    def eval(self, t, digits: int = 30):
        with mp.workdps(digits + 5):
            t = mp.mpf(t)
            A = mp.mpf(self.decay_exponent.numerator) / self.decay_exponent.denominator
            B = mp.mpf(self.growth_exponent.numerator) / self.growth_exponent.denominator
            pref = mp.exp(mp.pi * t * A + mp.pi * B / t) * mp.sqrt(t) / 2 ** self.n
            val = pref * self.series_sum(t, digits)
        return +val


def asymptotic_eval(m: int, n: int, ell: int, N: int, t, digits: int = 30):
    """Evaluate the truncated asymptotic expansion at tau = i t."""
    return AsymptoticExpansion.build(m, n, ell, N).eval(t, digits)


# ---------------------------------------------------------------------------
# Mordell-type integral
# ---------------------------------------------------------------------------


def mordell_quadrature(ell: int, m: int, n: int, t, digits: int = 25):
    """I_ell(t) = integral of e^{pi(n-m)t u^2 - 2 pi i ell u t} / cosh(pi u)^n du.

    Real by symmetry (the imaginary part of the integrand is odd); computed
    as 2 * integral over [0, L] of cos(2 pi ell u t) e^{pi(n-m)t u^2}
    sech(pi u)^n with a doubled-interval convergence check.
    """
    if not m > n >= 1:
        raise ValueError("need m > n >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    with mp.workdps(digits + 10):
        t = mp.mpf(t)
        L = _sech_moment_cutoff(0, n, digits)
        f = lambda u: (mp.cos(2 * mp.pi * ell * u * t)
                       * mp.exp(mp.pi * (n - m) * t * u * u)
                       / mp.cosh(mp.pi * u) ** n)
        val = 2 * mp.quad(f, [0, L / 4, L])
        check = 2 * mp.quad(f, [0, L / 2, 2 * L])
        if abs(val - check) > mp.mpf(10) ** (-digits) * (1 + abs(val)):
            raise QuadratureNotConverged(f"I_ell(t) unstable for t={t}")
    return +val


def intlem_errors(m: int, n: int, ell: int, N: int, ts, digits: int = 30):
    """|I_ell(t) - sum_{r<=N} a_r t^r/r!| for each t; the Taylor-remainder data.

    Dividing by t^{N+1} should stay bounded as t -> 0; the CLI and the
    acceptance suite consume this table.
    """
    exp = AsymptoticExpansion.build(m, n, ell, N)
    out = []
    for t in ts:
        truth = mordell_quadrature(ell, m, n, t, digits)
        approx = exp.series_sum(t, digits)
        out.append((t, float(abs(truth - approx))))
    return out
