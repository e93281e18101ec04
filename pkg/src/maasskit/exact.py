"""Exact coefficient arithmetic: Gaussian rationals times a power of pi.

Every truncated series in this package carries coefficients from one ring:
numbers of the form (a + b*i) * pi**s with a, b rational and s an integer.
Keeping the pi-power as explicit state (instead of a float) is what makes
identities between theta derivatives, eta quotients and Eisenstein series
checkable *exactly*, with no tolerance at all.

Sums of unlike pi-powers are deliberately not representable in
:class:`ExactScalar`; :class:`PiPolynomial` collects them and is used only
by the asymptotic-coefficient arithmetic, where genuinely mixed powers of
pi occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath as mp

__all__ = [
    "ExactScalar",
    "PiPolynomial",
    "MixedPiPowers",
    "ES_ZERO",
    "ES_ONE",
]

RationalLike = Union[int, Fraction]


class MixedPiPowers(ArithmeticError):
    """Raised when adding ExactScalars with different powers of pi."""


@dataclass(frozen=True)
class ExactScalar:
    """A Gaussian rational multiplied by an integer power of pi.

    The canonical zero has ``pi_exp == 0``.  Fractions are kept in lowest
    terms with positive denominator by ``fractions.Fraction`` itself.
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)
    pi_exp: int = 0

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))
        if self.re == 0 and self.im == 0 and self.pi_exp != 0:
            object.__setattr__(self, "pi_exp", 0)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(re: RationalLike, im: RationalLike = 0, pi_exp: int = 0) -> "ExactScalar":
        return ExactScalar(Fraction(re), Fraction(im), pi_exp)

    @staticmethod
    def i_power(k: int) -> "ExactScalar":
        """i**k as an ExactScalar (k may be negative)."""
        k %= 4
        re = Fraction((1, 0, -1, 0)[k])
        im = Fraction((0, 1, 0, -1)[k])
        return ExactScalar(re, im, 0)

    @staticmethod
    def pi_power(s: int, coeff: RationalLike = 1) -> "ExactScalar":
        return ExactScalar(Fraction(coeff), Fraction(0), s)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.im == 0 and self.pi_exp == 0

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.pi_exp != other.pi_exp:
            raise MixedPiPowers(
                f"cannot add pi^{self.pi_exp} and pi^{other.pi_exp} terms; "
                "use PiPolynomial for mixed powers"
            )
        return ExactScalar(self.re + other.re, self.im + other.im, self.pi_exp)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im, self.pi_exp)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return self + (-other)

    def __mul__(self, other: Union["ExactScalar", RationalLike]) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.re * other, self.im * other, self.pi_exp)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ES_ZERO
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.pi_exp + other.pi_exp,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero ExactScalar")
        norm = self.re * self.re + self.im * self.im
        return ExactScalar(self.re / norm, -self.im / norm, -self.pi_exp)

    def __truediv__(self, other: Union["ExactScalar", RationalLike]) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.re / other, self.im / other, self.pi_exp)
        return self * other.inverse()

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im, self.pi_exp)

    # -- numerics ----------------------------------------------------------

    def to_mpc(self, prec_ctx=None) -> mp.mpc:
        """Evaluate at the numeric value of pi (uses the active mp context)."""
        ctx = prec_ctx if prec_ctx is not None else mp
        pi_s = ctx.power(ctx.pi, self.pi_exp)
        return ctx.mpc(ctx.mpf(self.re.numerator) / self.re.denominator,
                       ctx.mpf(self.im.numerator) / self.im.denominator) * pi_s

    def __float__(self) -> float:
        if self.im != 0:
            raise ValueError("non-real ExactScalar")
        import math

        return float(self.re) * math.pi ** self.pi_exp

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if self.re != 0:
            parts.append(str(self.re))
        if self.im != 0:
            sign = "+" if self.im > 0 and parts else ""
            parts.append(f"{sign}{self.im}*i")
        body = "".join(parts) or "0"
        if self.pi_exp == 0:
            return body
        if self.re != 0 and self.im != 0:
            body = f"({body})"
        return f"{body}*pi^{self.pi_exp}"


ES_ZERO = ExactScalar()
ES_ONE = ExactScalar(Fraction(1))


class PiPolynomial:
    """A finite sum of Gaussian rationals times distinct powers of pi.

    The escape hatch for quantities like the asymptotic-expansion
    coefficients a_r, which mix several pi-powers.  Zero coefficients are
    never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict pi_exp -> (re, im) Fractions
        clean = {}
        for s, (re, im) in (terms or {}).items():
            re, im = Fraction(re), Fraction(im)
            if re != 0 or im != 0:
                clean[int(s)] = (re, im)
        self.terms = clean

    @staticmethod
    def from_scalar(x: ExactScalar) -> "PiPolynomial":
        if x.is_zero():
            return PiPolynomial()
        return PiPolynomial({x.pi_exp: (x.re, x.im)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(im == 0 for _, im in self.terms.values())

    def __add__(self, other: "PiPolynomial") -> "PiPolynomial":
        if isinstance(other, ExactScalar):
            other = PiPolynomial.from_scalar(other)
        out = dict(self.terms)
        for s, (re, im) in other.terms.items():
            r0, i0 = out.get(s, (Fraction(0), Fraction(0)))
            out[s] = (r0 + re, i0 + im)
        return PiPolynomial(out)

    def __neg__(self) -> "PiPolynomial":
        return PiPolynomial({s: (-re, -im) for s, (re, im) in self.terms.items()})

    def __sub__(self, other: "PiPolynomial") -> "PiPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "PiPolynomial":
        if isinstance(other, (int, Fraction)):
            other = PiPolynomial({0: (Fraction(other), Fraction(0))})
        elif isinstance(other, ExactScalar):
            other = PiPolynomial.from_scalar(other)
        out: dict = {}
        for s1, (a, b) in self.terms.items():
            for s2, (c, d) in other.terms.items():
                s = s1 + s2
                r0, i0 = out.get(s, (Fraction(0), Fraction(0)))
                out[s] = (r0 + a * c - b * d, i0 + a * d + b * c)
        return PiPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactScalar):
            other = PiPolynomial.from_scalar(other)
        if not isinstance(other, PiPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def to_mpc(self, prec_ctx=None) -> mp.mpc:
        ctx = prec_ctx if prec_ctx is not None else mp
        total = ctx.mpc(0)
        for s, (re, im) in self.terms.items():
            val = ctx.mpc(ctx.mpf(re.numerator) / re.denominator,
                          ctx.mpf(im.numerator) / im.denominator)
            total += val * ctx.power(ctx.pi, s)
        return total

    def to_real(self, prec_ctx=None):
        val = self.to_mpc(prec_ctx)
        if not self.is_real():
            raise ValueError("PiPolynomial has a nonzero imaginary part")
        return val.real

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for s in sorted(self.terms, reverse=True):
            re, im = self.terms[s]
            x = ExactScalar(re, im, s)
            bits.append(repr(x))
        return " + ".join(bits)
