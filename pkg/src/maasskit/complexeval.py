"""Arbitrary-precision complex evaluation of the modular building blocks.

Evaluators for Jacobi's theta function, Dedekind eta, the congruence theta
functions theta_{a,b}, Zwegers' mu and its completion, the higher-index
Appell sums f_w^(M) with their completions, the nonholomorphic kernels E
and R, the edekind-eta multiplier extraction and the half-integral slash
operator.  All routines work at a requested decimal precision with a few
guard digits; the lattice sums are truncated with Gaussian tail bounds
computed from Im(tau), then extended until the last included terms are
below tolerance, so doubling the window changes nothing at the reported
precision.

Conventions: all square roots and fractional powers are principal-branch;
tau always lies in the upper half-plane; q = e^{2 pi i tau},
zeta = e^{2 pi i z}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Tuple

import mpmath as mp

__all__ = [
    "TauPoint",
    "ModularMatrix",
    "Precision",
    "PrecisionUnreachable",
    "PoleOnLattice",
    "InconsistentMultiplier",
    "lattice_distance",
    "theta_num",
    "theta_prime0_num",
    "eta_num",
    "theta_ab_num",
    "E_num",
    "R_num",
    "mu_num",
    "mu_hat_num",
    "f_M_num",
    "R_Ml_num",
    "f_hat_num",
    "phi_num",
    "psi_num",
    "kronecker_symbol",
    "slash_num",
]


class PrecisionUnreachable(ArithmeticError):
    """The requested precision cannot be met (tail bound infeasible)."""


class PoleOnLattice(ArithmeticError):
    """An argument sits on (or too close to) the pole lattice Z tau + Z."""


class InconsistentMultiplier(ArithmeticError):
    """Extracted multiplier values disagree across sample points."""


@dataclass(frozen=True)
class TauPoint:
    """A point tau = u + i v in the upper half-plane."""

    u: float
    v: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("tau must have positive imaginary part")

    def mpc(self, ctx=None) -> mp.mpc:
        ctx = ctx or mp
        return ctx.mpc(self.u, self.v)

    @staticmethod
    def of(tau) -> "TauPoint":
        if isinstance(tau, TauPoint):
            return tau
        t = mp.mpc(tau)
        return TauPoint(float(t.real), float(t.imag))


@dataclass(frozen=True)
class ModularMatrix:
    """An element of SL_2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    @property
    def is_gamma0_2(self) -> bool:
        return self.c % 2 == 0

    def act(self, tau, ctx=None):
        ctx = ctx or mp
        tau = ctx.mpc(tau)
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def j_factor(self, tau, ctx=None):
        """c tau + d."""
        ctx = ctx or mp
        return self.c * ctx.mpc(tau) + self.d

    def __mul__(self, other: "ModularMatrix") -> "ModularMatrix":
        return ModularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ModularMatrix":
        return ModularMatrix(self.d, -self.b, -self.c, self.a)

    @staticmethod
    def T(power: int = 1) -> "ModularMatrix":
        return ModularMatrix(1, power, 0, 1)

    @staticmethod
    def S() -> "ModularMatrix":
        return ModularMatrix(0, -1, 1, 0)

    @staticmethod
    def gamma0_2_word(rng, length: int = 5, max_entry: int = 40) -> "ModularMatrix":
        """A random word in the generators of Gamma_0(2), with bounded entries.

        Built from T = [1,1;0,1] and U = [1,0;2,1]; membership is by
        construction, the entry bound keeps j-factors tame.
        """
        gens = [ModularMatrix.T(1), ModularMatrix.T(-1),
                ModularMatrix(1, 0, 2, 1), ModularMatrix(1, 0, -2, 1)]
        while True:
            g = ModularMatrix(1, 0, 0, 1)
            for _ in range(length):
                g = g * rng.choice(gens)
            if g.c % 2 != 0:
                continue
            if max(abs(g.a), abs(g.b), abs(g.c), abs(g.d)) > max_entry:
                continue
            if g.c == 0:
                continue
            if g.c < 0:
                g = ModularMatrix(-g.a, -g.b, -g.c, -g.d)
            return g


@dataclass(frozen=True)
class Precision:
    """Working precision plus derived truncation data for lattice sums."""

    digits: int = 30

    @property
    def tolerance(self) -> float:
        return 10.0 ** (-self.digits)

    @property
    def guard_digits(self) -> int:
        return self.digits + 15

    def log_target(self) -> float:
        """Natural log of tolerance/10, the per-term tail target."""
        return -(self.digits + 1) * math.log(10.0)

    def gaussian_window(self, rate: float, drift: float = 0.0) -> int:
        """Smallest N with rate*(N - drift)^2 >= |log target|; rate > 0."""
        if rate <= 0:
            raise PrecisionUnreachable("nonpositive Gaussian decay rate")
        N = abs(drift) + math.sqrt(-self.log_target() / rate)
        return int(math.ceil(N)) + 2


def _ctx_digits(digits: int) -> int:
    return digits + 15


def lattice_distance(z, tau, exclude_origin: bool = False) -> float:
    """Distance from z to the lattice Z tau + Z.

    Scans every lattice row within the current best distance (at small
    Im(tau) several rows compete, so checking only the two nearest rows is
    not enough).  With exclude_origin the point 0 itself is skipped, giving
    the distance to the nearest *other* lattice point.
    """
    z = mp.mpc(z)
    tau = mp.mpc(tau)
    v = float(tau.imag)
    best = 2.0
    alpha = float(z.imag) / v
    for da in range(math.floor(alpha - best / v), math.ceil(alpha + best / v) + 1):
        rest = z - da * tau
        for db in (mp.floor(rest.real), mp.ceil(rest.real)):
            if exclude_origin and da == 0 and db == 0:
                continue
            d = float(abs(z - (da * tau + db)))
            if d < best:
                best = d
    return best


def _require_off_lattice(z, tau, what: str, min_dist: float = 1e-12) -> None:
    if lattice_distance(z, tau) < min_dist:
        raise PoleOnLattice(f"{what} lies on the lattice Z*tau + Z")


# ---------------------------------------------------------------------------
# theta, eta, theta_{a,b}
# ---------------------------------------------------------------------------


def theta_num(z, tau, digits: int = 30):
    """Jacobi theta: sum over nu in 1/2 + Z of e^{pi i nu^2 tau + 2 pi i nu (z + 1/2)}."""
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        z = mp.mpc(z)
        tau = mp.mpc(tau)
        v = float(tau.imag)
        N = prec.gaussian_window(math.pi * v / 2.0,
                                 drift=2.0 * abs(float(z.imag)) / v + 1.0)
        total = mp.mpc(0)
        for s in range(-N, N):
            nu = s + mp.mpf(1) / 2
            total += mp.expjpi(nu * nu * tau + 2 * nu * (z + mp.mpf(1) / 2))
    return +total


def theta_prime0_num(tau, digits: int = 30):
    """theta'(0; tau) = d/dz theta(z; tau) at z = 0 (equals -2 pi eta^3)."""
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        tau = mp.mpc(tau)
        v = float(tau.imag)
        N = prec.gaussian_window(math.pi * v / 2.0, drift=1.0)
        total = mp.mpc(0)
        for s in range(-N, N):
            nu = s + mp.mpf(1) / 2
            total += 2j * mp.pi * nu * mp.expjpi(nu * nu * tau + nu)
    return +total


def eta_num(tau, digits: int = 30):
    """Dedekind eta via the pentagonal-number sum."""
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        tau = mp.mpc(tau)
        v = float(tau.imag)
        N = prec.gaussian_window(3.0 * math.pi * v, drift=1.0)
        total = mp.mpc(0)
        for k in range(-N, N + 1):
            g = Fraction(k * (3 * k - 1), 2)
            total += (-1) ** k * mp.expjpi(2 * tau * (mp.mpf(g.numerator) / g.denominator))
        total *= mp.expjpi(tau / 12)
    return +total


def theta_ab_num(a: int, b: int, z, tau, digits: int = 30):
    """theta_{a,b}(z;tau) = sum over lambda = b mod 2a of e^{pi i la^2 tau/(2a) + 2 pi i la z}."""
    if a < 1:
        raise ValueError("index a must be a positive integer")
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        z = mp.mpc(z)
        tau = mp.mpc(tau)
        v = float(tau.imag)
        # lambda = b + 2a k; |term| = exp(-pi v la^2/(2a) - 2 pi la Im z)
        rate = math.pi * v * 2 * a  # in k units
        drift = (abs(float(z.imag)) * 2 * a / v + abs(b)) / (2 * a) + 1.0
        N = prec.gaussian_window(rate, drift=drift)
        total = mp.mpc(0)
        for k in range(-N, N + 1):
            la = b + 2 * a * k
            total += mp.expjpi(mp.mpf(la * la) * tau / (2 * a) + 2 * la * z)
    return +total


def phi_num(z, tau, m: int, n: int, digits: int = 30):
    """The meromorphic Jacobi form theta(z + 1/2)^m / theta(z)^n."""
    _require_off_lattice(z, tau, "z (pole of the theta quotient)")
    with mp.workdps(_ctx_digits(digits)):
        num = theta_num(mp.mpc(z) + mp.mpf(1) / 2, tau, digits + 5)
        den = theta_num(z, tau, digits + 5)
        out = num ** m / den ** n
    return +out


# ---------------------------------------------------------------------------
# E and R kernels
# ---------------------------------------------------------------------------


def E_num(z, digits: int = 30):
    """E(z) = 2 int_0^z e^{-pi t^2} dt = erf(sqrt(pi) z) (entire, odd)."""
    with mp.workdps(_ctx_digits(digits)):
        out = mp.erf(mp.sqrt(mp.pi) * mp.mpc(z))
        if mp.mpc(z).imag == 0:
            out = out.real
    return +out


def R_num(z, tau, digits: int = 30):
    """Zwegers' nonholomorphic kernel

    R(z;tau) = sum over nu in 1/2+Z of
        (sgn(nu) - E((nu + Im z / v) sqrt(2v))) (-1)^{nu-1/2} q^{-nu^2/2} e^{-2 pi i nu z}.

    The summand decays like exp(-pi v (nu + Im z/v)^2 - pi (Im z)^2/v), so a
    Gaussian window around -Im(z)/v suffices.
    """
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        z = mp.mpc(z)
        tau = mp.mpc(tau)
        v = tau.imag
        a = z.imag / v
        N = prec.gaussian_window(math.pi * float(v), drift=float(abs(a)) + 1.0)
        sq2v = mp.sqrt(2 * v)
        total = mp.mpc(0)
        for s in range(-N, N):
            nu = s + mp.mpf(1) / 2
            sgn = 1 if nu > 0 else -1
            weight = sgn - mp.erf(mp.sqrt(mp.pi) * (nu + a) * sq2v)
            if weight == 0:
                continue
            term = weight * (-1) ** s * mp.expjpi(-nu * nu * tau - 2 * nu * z)
            total += term
    return +total


# ---------------------------------------------------------------------------
# mu and its completion
# ---------------------------------------------------------------------------


def mu_num(z1, z2, tau, digits: int = 30):
    """Zwegers' Appell-Lerch sum
    mu(z1,z2;tau) = e^{pi i z1}/theta(z2) * sum_r (-1)^r e^{2 pi i r z2} q^{r(r+1)/2}
                    / (1 - e^{2 pi i z1} q^r).
    """
    _require_off_lattice(z1, tau, "z1 (pole of mu)")
    _require_off_lattice(z2, tau, "z2 (theta zero)")
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        z1 = mp.mpc(z1)
        z2 = mp.mpc(z2)
        tau = mp.mpc(tau)
        v = float(tau.imag)
        drift = (abs(float(z1.imag)) + abs(float(z2.imag))) / v + 2.0
        N = prec.gaussian_window(math.pi * v / 2.0, drift=drift)
        zeta1 = mp.expjpi(2 * z1)
        total = mp.mpc(0)
        for r in range(-N, N + 1):
            den = 1 - zeta1 * mp.expjpi(2 * r * tau)
            if abs(den) < 1e-12:
                raise PoleOnLattice("mu summand denominator vanished")
            total += ((-1) ** r * mp.expjpi(2 * r * z2 + r * (r + 1) * tau)) / den
        total *= mp.expjpi(z1) / theta_num(z2, tau, digits + 5)
    return +total


def mu_hat_num(z1, z2, tau, digits: int = 30):
    """Completion mu^(z1,z2;tau) = mu(z1,z2) + (i/2) R(z1 - z2; tau)."""
    with mp.workdps(_ctx_digits(digits)):
        out = mu_num(z1, z2, tau, digits) + mp.mpc(0, 1) / 2 * R_num(
            mp.mpc(z1) - mp.mpc(z2), tau, digits)
    return +out


# ---------------------------------------------------------------------------
# higher-index Appell sums and completions
# ---------------------------------------------------------------------------


def f_M_num(w, z, tau, M: int, digits: int = 30):
    """f_w^{(M)}(z;tau) = sum_alpha e^{4 pi i M alpha z} q^{M alpha^2}
    / (1 - e^{2 pi i (z-w)} q^alpha)."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    _require_off_lattice(mp.mpc(z) - mp.mpc(w), tau, "z - w (pole of f^(M))")
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        z = mp.mpc(z)
        w = mp.mpc(w)
        tau = mp.mpc(tau)
        v = float(tau.imag)
        drift = 2.0 * abs(float(z.imag)) / v + abs(float((z - w).imag)) / v + 2.0
        N = prec.gaussian_window(2 * math.pi * v * M, drift=drift)
        zw = mp.expjpi(2 * (z - w))
        total = mp.mpc(0)
        for alpha in range(-N, N + 1):
            den = 1 - zw * mp.expjpi(2 * alpha * tau)
            if abs(den) < 1e-12:
                raise PoleOnLattice("f^(M) summand denominator vanished")
            total += mp.expjpi(4 * M * alpha * z + 2 * M * alpha * alpha * tau) / den
    return +total


def R_Ml_num(M: int, ell: int, w, tau, digits: int = 30):
    """R_{M,ell}(w;tau) = sum over lambda = ell mod 2M of
    {sgn(lambda + 1/2) - E((lambda + 2M Im w / v) sqrt(v/M))}
    e^{-pi i lambda^2 tau / (2M) - 2 pi i lambda w}.
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    prec = Precision(digits)
    with mp.workdps(prec.guard_digits):
        w = mp.mpc(w)
        tau = mp.mpc(tau)
        v = tau.imag
        a = 2 * M * w.imag / v
        # |summand| <= exp(-pi v (la + a)^2 / (2M) - pi v a^2/(2M) + O(1))
        rate = math.pi * float(v) / (2 * M) * (2 * M) ** 2  # in k units, la = ell + 2M k
        drift = (float(abs(a)) + abs(ell)) / (2 * M) + 1.0
        N = prec.gaussian_window(rate, drift=drift)
        sqvm = mp.sqrt(v / M)
        total = mp.mpc(0)
        for k in range(-N, N + 1):
            la = ell + 2 * M * k
            sgn = 1 if la + mp.mpf(1) / 2 > 0 else -1
            weight = sgn - mp.erf(mp.sqrt(mp.pi) * (la + a) * sqvm)
            if weight == 0:
                continue
            total += weight * mp.expjpi(-mp.mpf(la * la) * tau / (2 * M) - 2 * la * w)
    return +total


def f_hat_num(w, z, tau, M: int, digits: int = 30):
    """Completion f^_w^{(M)} = f_w^{(M)} - (1/2) sum_{ell mod 2M} R_{M,ell}(w) theta_{M,ell}(z)."""
    with mp.workdps(_ctx_digits(digits)):
        out = f_M_num(w, z, tau, M, digits)
        for ell in range(2 * M):
            out -= (R_Ml_num(M, ell, w, tau, digits)
                    * theta_ab_num(M, ell, z, tau, digits)) / 2
    return +out


# ---------------------------------------------------------------------------
# eta multiplier and slash operator
# ---------------------------------------------------------------------------


def psi_num(gamma: ModularMatrix, tau=None, digits: int = 30,
            samples: Tuple[complex, ...] = (0.3 + 1.1j, -0.2 + 0.8j, 0.1 + 1.7j)):
    """The eta multiplier psi(gamma) = eta(gamma tau) / ((c tau + d)^{1/2} eta(tau)).

    Principal-branch square root.  The value is checked to be
    tau-independent over three sample points, of modulus one, and a 24th
    root of unity; InconsistentMultiplier otherwise.
    """
    with mp.workdps(_ctx_digits(digits)):
        pts = [mp.mpc(tau)] if tau is not None else [mp.mpc(s) for s in samples]
        vals = []
        for t in pts:
            num = eta_num(gamma.act(t), digits)
            den = mp.sqrt(gamma.j_factor(t)) * eta_num(t, digits)
            vals.append(num / den)
        psi = vals[0]
        tol = mp.mpf(10) ** (-digits + 5)
        for other in vals[1:]:
            if abs(other - psi) > tol:
                raise InconsistentMultiplier("eta multiplier varies with tau")
        if abs(abs(psi) - 1) > tol or abs(psi ** 24 - 1) > tol:
            raise InconsistentMultiplier("eta multiplier is not a 24th root of unity")
    return +psi


def kronecker_symbol(a: int, n: int) -> int:
    """The Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos of n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def _epsilon_d(d: int) -> mp.mpc:
    if d % 2 == 0:
        raise ValueError("epsilon_d needs odd d")
    return mp.mpc(1) if d % 4 == 1 else mp.mpc(0, 1)


def slash_num(f: Callable, kappa, gamma: ModularMatrix, tau, digits: int = 30):
    """(f |_kappa gamma)(tau) = j(gamma,tau)^{-2 kappa} f(gamma tau).

    For integral kappa, j = sqrt(c tau + d); for half-integral kappa,
    j = (c/d) epsilon_d^{-1} sqrt(c tau + d) with the Kronecker symbol and
    epsilon_d = 1 or i according to d mod 4.
    """
    kappa = Fraction(float(kappa)) if not isinstance(kappa, (int, Fraction)) else Fraction(kappa)
    if kappa.denominator not in (1, 2):
        raise ValueError("kappa must be integral or half-integral")
    with mp.workdps(_ctx_digits(digits)):
        tau = mp.mpc(tau)
        root = mp.sqrt(gamma.j_factor(tau))
        if kappa.denominator == 1:
            j = root
        else:
            j = kronecker_symbol(gamma.c, gamma.d) / _epsilon_d(gamma.d) * root
        out = j ** int(-2 * kappa) * f(gamma.act(tau))
    return +out
