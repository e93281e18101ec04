"""Truncated fractional-exponent series with exact coefficients.

Two series types live here:

* :class:`QSeries` -- a truncated series in q**(1/den) with
  :class:`~maasskit.exact.ExactScalar` coefficients.  Houses the Dedekind
  eta expansion, eta quotients, E2 and the Laurent coefficients of the
  meromorphic theta quotient.
* :class:`ZetaQSeries` -- the same, but each q-coefficient is a Laurent
  polynomial in a second variable zeta (with an optional half-integer
  lattice, stored doubled), used for two-variable character expansions and
  the Jacobi triple product.

Truncation is explicit state.  A series with truncation T on lattice
denominator d is known exactly modulo q**(T/d); every operation records
the weakest valid truncation of its result rather than silently assuming
more than it knows.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Optional, Tuple

from .exact import ES_ONE, ES_ZERO, ExactScalar

__all__ = [
    "QSeries",
    "ZetaQSeries",
    "NonUnitLeadingTerm",
    "MismatchAtOrder",
    "eta_qexp",
    "eta_quotient",
    "partition_qexp",
    "coeff_extract",
    "series_to_json",
    "series_from_json",
]


class NonUnitLeadingTerm(ValueError):
    """The leading term of the series is not invertible in the ring."""


class MismatchAtOrder(ValueError):
    """Two series that should agree differ; carries the first bad exponent."""

    def __init__(self, exponent: Fraction, message: str = ""):
        self.exponent = exponent
        super().__init__(message or f"series differ first at q^({exponent})")


def _as_scalar(c) -> ExactScalar:
    if isinstance(c, ExactScalar):
        return c
    return ExactScalar(Fraction(c))


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------


class QSeries:
    """Truncated series sum_k c_k q^(k/den), known modulo q^(trunc/den).

    Instances are immutable by convention: no method mutates ``self``.
    Invariants: stored exponents k satisfy k < trunc; no zero coefficients
    are stored; den is minimal for the stored data.
    """

    __slots__ = ("den", "trunc", "coeffs")

    def __init__(self, den: int, trunc: int, coeffs: Dict[int, ExactScalar],
                 _normalized: bool = False):
        if den <= 0:
            raise ValueError("den must be positive")
        if not _normalized:
            coeffs = {k: c for k, c in coeffs.items() if k < trunc and not c.is_zero()}
            g = gcd(den, trunc, *coeffs.keys()) if coeffs else gcd(den, trunc)
            if g > 1:
                den //= g
                trunc //= g
                coeffs = {k // g: c for k, c in coeffs.items()}
        self.den = den
        self.trunc = trunc
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(trunc: int = 1, den: int = 1) -> "QSeries":
        return QSeries(den, trunc, {})

    @staticmethod
    def one(trunc: int, den: int = 1) -> "QSeries":
        return QSeries(den, trunc, {0: ES_ONE})

    @staticmethod
    def monomial(coeff, k: int, den: int = 1, trunc: Optional[int] = None) -> "QSeries":
        c = _as_scalar(coeff)
        if trunc is None:
            trunc = k + den
        return QSeries(den, trunc, {k: c})

    @staticmethod
    def from_terms(terms: Iterable[Tuple[Fraction, ExactScalar]], trunc_exp: Fraction) -> "QSeries":
        """Build from (rational exponent, coefficient) pairs."""
        terms = [(Fraction(e), _as_scalar(c)) for e, c in terms]
        trunc_exp = Fraction(trunc_exp)
        d = trunc_exp.denominator
        for e, _ in terms:
            d = lcm(d, e.denominator)
        coeffs: Dict[int, ExactScalar] = {}
        for e, c in terms:
            k = int(e * d)
            coeffs[k] = coeffs.get(k, ES_ZERO) + c
        return QSeries(d, int(trunc_exp * d), coeffs)

    # -- structure ---------------------------------------------------------

    @property
    def trunc_exp(self) -> Fraction:
        """Truncation order as a rational q-exponent."""
        return Fraction(self.trunc, self.den)

    def valuation(self) -> Fraction:
        """Lowest stored exponent, or the truncation order if empty."""
        if not self.coeffs:
            return self.trunc_exp
        return Fraction(min(self.coeffs), self.den)

    def _val_key(self) -> int:
        return min(self.coeffs) if self.coeffs else self.trunc

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, exponent) -> ExactScalar:
        """Coefficient of q^exponent; exponent may be int or Fraction."""
        e = Fraction(exponent)
        if e >= self.trunc_exp:
            raise ValueError(f"exponent {e} is beyond truncation {self.trunc_exp}")
        k = e * self.den
        if k.denominator != 1:
            return ES_ZERO
        return self.coeffs.get(int(k), ES_ZERO)

    def terms(self):
        """Sorted (Fraction exponent, coefficient) pairs."""
        return [(Fraction(k, self.den), self.coeffs[k]) for k in sorted(self.coeffs)]

    def _on_lattice(self, d: int) -> Dict[int, ExactScalar]:
        s = d // self.den
        if s == 1:
            return self.coeffs
        return {k * s: c for k, c in self.coeffs.items()}

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        d = lcm(self.den, other.den)
        t = min(self.trunc * (d // self.den), other.trunc * (d // other.den))
        out = dict(self._on_lattice(d))
        for k, c in other._on_lattice(d).items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return QSeries(d, t, out)

    def __neg__(self) -> "QSeries":
        return QSeries(self.den, self.trunc, {k: -c for k, c in self.coeffs.items()},
                       _normalized=True)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction, ExactScalar)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        d = lcm(self.den, other.den)
        sa, sb = d // self.den, d // other.den
        a, b = self._on_lattice(d), other._on_lattice(d)
        ta, tb = self.trunc * sa, other.trunc * sb
        va = min(a) if a else ta
        vb = min(b) if b else tb
        t = min(va + tb, vb + ta)
        out: Dict[int, ExactScalar] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                if k >= t:
                    continue
                p = c1 * c2
                if k in out:
                    s = out[k] + p
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
                else:
                    out[k] = p
        return QSeries(d, t, out, _normalized=False)

    __rmul__ = __mul__

    def scale(self, c) -> "QSeries":
        c = _as_scalar(c)
        if c.is_zero():
            return QSeries.zero(self.trunc, self.den)
        return QSeries(self.den, self.trunc,
                       {k: v * c for k, v in self.coeffs.items()}, _normalized=True)

    def shift(self, exponent) -> "QSeries":
        """Multiply by the monomial q^exponent."""
        e = Fraction(exponent)
        d = lcm(self.den, e.denominator)
        s = d // self.den
        ke = int(e * d)
        return QSeries(d, self.trunc * s + ke,
                       {k * s + ke: c for k, c in self.coeffs.items()})

    def invert(self) -> "QSeries":
        if not self.coeffs:
            raise NonUnitLeadingTerm("cannot invert a series with no known nonzero term")
        v = self._val_key()
        c0 = self.coeffs[v]
        rel = self.trunc - v  # relative precision, preserved by inversion
        # a = c0 q^v (1 + u); 1/a = c0^{-1} q^{-v} sum (-u)^j, solved by recurrence.
        c0inv = c0.inverse()
        a = {k - v: c * c0inv for k, c in self.coeffs.items()}  # normalized: a[0] = 1
        b: Dict[int, ExactScalar] = {0: ES_ONE}
        akeys = sorted(k for k in a if k > 0)
        for j in range(1, rel):
            acc = ES_ZERO
            for k in akeys:
                if k > j:
                    break
                bj = b.get(j - k)
                if bj is not None:
                    acc = acc + a[k] * bj
            if not acc.is_zero():
                b[j] = -acc
        out = {k - v: c * c0inv for k, c in b.items()}
        return QSeries(self.den, rel - v, out)

    def __pow__(self, e: int) -> "QSeries":
        if e == 0:
            # preserves relative precision around exponent 0
            return QSeries.one(self.trunc - self._val_key() if self.coeffs else self.trunc,
                               self.den)
        base = self if e > 0 else self.invert()
        e = abs(e)
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def substitute_scale(self, s: int) -> "QSeries":
        """q -> q^s (so f(tau) becomes f(s*tau) on q-expansions)."""
        if s <= 0:
            raise ValueError("scale must be a positive integer")
        return QSeries(self.den, self.trunc * s,
                       {k * s: c for k, c in self.coeffs.items()})

    def truncate(self, trunc_exp) -> "QSeries":
        e = Fraction(trunc_exp)
        d = lcm(self.den, e.denominator)
        s = d // self.den
        t = min(self.trunc * s, int(e * d))
        return QSeries(d, t, {k * s: c for k, c in self.coeffs.items()})

    def derivative_q_ddq(self) -> "QSeries":
        """Apply q d/dq (exponents as multipliers)."""
        return QSeries(self.den, self.trunc,
                       {k: c * Fraction(k, self.den) for k, c in self.coeffs.items()})

    # -- comparisons ---------------------------------------------------------

    def first_mismatch(self, other: "QSeries") -> Optional[Fraction]:
        """Smallest exponent where the two series differ, up to the common
        truncation; None if they agree."""
        d = lcm(self.den, other.den)
        t = min(self.trunc * (d // self.den), other.trunc * (d // other.den))
        a, b = self._on_lattice(d), other._on_lattice(d)
        keys = sorted(set(a) | set(b))
        for k in keys:
            if k >= t:
                break
            if a.get(k, ES_ZERO) != b.get(k, ES_ZERO):
                return Fraction(k, d)
        return None

    def assert_equal(self, other: "QSeries", what: str = "") -> None:
        bad = self.first_mismatch(other)
        if bad is not None:
            raise MismatchAtOrder(bad, f"{what + ': ' if what else ''}first mismatch at q^({bad})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.den == other.den and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    # -- numerics ------------------------------------------------------------

    def eval_mpc(self, q, ctx=None):
        """Sum the stored terms at a numeric q (mpmath-compatible scalar).

        Plain partial sum; the truncation tail is the caller's business.
        """
        import mpmath as mp

        ctx = ctx or mp
        q = ctx.mpc(q)
        total = ctx.mpc(0)
        for k in sorted(self.coeffs):
            total += self.coeffs[k].to_mpc(ctx) * ctx.power(q, ctx.mpf(k) / self.den)
        return total

    def __repr__(self) -> str:
        bits = []
        for e, c in self.terms()[:8]:
            bits.append(f"({c!r})*q^({e})")
        more = " + ..." if len(self.coeffs) > 8 else ""
        return f"QSeries[{' + '.join(bits) or '0'}{more} + O(q^({self.trunc_exp}))]"


# ---------------------------------------------------------------------------
# Laurent polynomials in zeta (plain dicts int -> ExactScalar)
# ---------------------------------------------------------------------------


def _zp_add_into(acc: Dict[int, ExactScalar], other: Dict[int, ExactScalar], scale=None):
    for j, c in other.items():
        if scale is not None:
            c = c * scale
        if j in acc:
            s = acc[j] + c
            if s.is_zero():
                del acc[j]
            else:
                acc[j] = s
        elif not c.is_zero():
            acc[j] = c


def _zp_mul(a: Dict[int, ExactScalar], b: Dict[int, ExactScalar]) -> Dict[int, ExactScalar]:
    out: Dict[int, ExactScalar] = {}
    for j1, c1 in a.items():
        for j2, c2 in b.items():
            j = j1 + j2
            p = c1 * c2
            if j in out:
                s = out[j] + p
                if s.is_zero():
                    del out[j]
                else:
                    out[j] = s
            else:
                out[j] = p
    return out


# ---------------------------------------------------------------------------
# ZetaQSeries
# ---------------------------------------------------------------------------


class ZetaQSeries:
    """Truncated q-series whose coefficients are Laurent polynomials in zeta.

    ``coeffs[k][j]`` is the coefficient of q^(k/den) * zeta^(j/zden).
    Half-integer zeta-powers (needed by the triple product) are stored on a
    doubled lattice: zden is 1 or 2.
    """

    __slots__ = ("den", "zden", "trunc", "coeffs")

    def __init__(self, den: int, trunc: int, coeffs: Dict[int, Dict[int, ExactScalar]],
                 zden: int = 1, _normalized: bool = False):
        if den <= 0 or zden not in (1, 2):
            raise ValueError("bad lattice denominators")
        if not _normalized:
            clean: Dict[int, Dict[int, ExactScalar]] = {}
            for k, zp in coeffs.items():
                if k >= trunc:
                    continue
                z = {j: c for j, c in zp.items() if not c.is_zero()}
                if z:
                    clean[k] = z
            coeffs = clean
            g = gcd(den, trunc, *coeffs.keys()) if coeffs else gcd(den, trunc)
            if g > 1:
                den //= g
                trunc //= g
                coeffs = {k // g: z for k, z in coeffs.items()}
            if zden == 2 and all(j % 2 == 0 for z in coeffs.values() for j in z):
                zden = 1
                coeffs = {k: {j // 2: c for j, c in z.items()} for k, z in coeffs.items()}
        self.den = den
        self.zden = zden
        self.trunc = trunc
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(trunc: int = 1, den: int = 1) -> "ZetaQSeries":
        return ZetaQSeries(den, trunc, {})

    @staticmethod
    def one(trunc: int, den: int = 1) -> "ZetaQSeries":
        return ZetaQSeries(den, trunc, {0: {0: ES_ONE}})

    @staticmethod
    def from_qseries(f: QSeries) -> "ZetaQSeries":
        return ZetaQSeries(f.den, f.trunc, {k: {0: c} for k, c in f.coeffs.items()},
                           _normalized=True)

    @staticmethod
    def monomial(coeff, k: Fraction, j: Fraction, trunc_exp) -> "ZetaQSeries":
        """coeff * q^k * zeta^j, known modulo q^trunc_exp."""
        k, j, te = Fraction(k), Fraction(j), Fraction(trunc_exp)
        den = lcm(k.denominator, te.denominator)
        zden = j.denominator
        if zden not in (1, 2):
            raise ValueError("zeta exponents limited to halves")
        return ZetaQSeries(den, int(te * den), {int(k * den): {int(j * zden): _as_scalar(coeff)}},
                           zden=zden)

    # -- structure -----------------------------------------------------------

    @property
    def trunc_exp(self) -> Fraction:
        return Fraction(self.trunc, self.den)

    def is_zero(self) -> bool:
        return not self.coeffs

    def zeta_coeff(self, k, j) -> ExactScalar:
        """Coefficient of q^k zeta^j (rational exponents)."""
        k, j = Fraction(k), Fraction(j)
        if k >= self.trunc_exp:
            raise ValueError("exponent beyond truncation")
        kk, jj = k * self.den, j * self.zden
        if kk.denominator != 1 or jj.denominator != 1:
            return ES_ZERO
        return self.coeffs.get(int(kk), {}).get(int(jj), ES_ZERO)

    def _on_lattice(self, d: int, zd: int) -> Dict[int, Dict[int, ExactScalar]]:
        s, zs = d // self.den, zd // self.zden
        if s == 1 and zs == 1:
            return self.coeffs
        return {k * s: ({j * zs: c for j, c in z.items()} if zs != 1 else z)
                for k, z in self.coeffs.items()}

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "ZetaQSeries":
        if isinstance(other, QSeries):
            other = ZetaQSeries.from_qseries(other)
        if not isinstance(other, ZetaQSeries):
            return NotImplemented
        d = lcm(self.den, other.den)
        zd = max(self.zden, other.zden)
        t = min(self.trunc * (d // self.den), other.trunc * (d // other.den))
        out = {k: dict(z) for k, z in self._on_lattice(d, zd).items()}
        for k, z in other._on_lattice(d, zd).items():
            acc = out.setdefault(k, {})
            _zp_add_into(acc, z)
            if not acc:
                del out[k]
        return ZetaQSeries(d, t, out, zden=zd)

    def __neg__(self) -> "ZetaQSeries":
        return ZetaQSeries(self.den, self.trunc,
                           {k: {j: -c for j, c in z.items()} for k, z in self.coeffs.items()},
                           zden=self.zden, _normalized=True)

    def __sub__(self, other) -> "ZetaQSeries":
        return self + (-other)

    def __mul__(self, other) -> "ZetaQSeries":
        if isinstance(other, (int, Fraction, ExactScalar)):
            c = _as_scalar(other)
            if c.is_zero():
                return ZetaQSeries.zero(self.trunc, self.den)
            return ZetaQSeries(self.den, self.trunc,
                               {k: {j: v * c for j, v in z.items()}
                                for k, z in self.coeffs.items()},
                               zden=self.zden, _normalized=True)
        if isinstance(other, QSeries):
            other = ZetaQSeries.from_qseries(other)
        if not isinstance(other, ZetaQSeries):
            return NotImplemented
        d = lcm(self.den, other.den)
        zd = max(self.zden, other.zden)
        a = self._on_lattice(d, zd)
        b = other._on_lattice(d, zd)
        ta, tb = self.trunc * (d // self.den), other.trunc * (d // other.den)
        va = min(a) if a else ta
        vb = min(b) if b else tb
        t = min(va + tb, vb + ta)
        out: Dict[int, Dict[int, ExactScalar]] = {}
        for k1, z1 in a.items():
            for k2, z2 in b.items():
                k = k1 + k2
                if k >= t:
                    continue
                prod = _zp_mul(z1, z2)
                acc = out.setdefault(k, {})
                _zp_add_into(acc, prod)
                if not acc:
                    del out[k]
        return ZetaQSeries(d, t, out, zden=zd)

    __rmul__ = __mul__

    def zeta_shift(self, j: Fraction) -> "ZetaQSeries":
        """Multiply by zeta^j."""
        j = Fraction(j)
        zd = lcm(self.zden, j.denominator)
        if zd not in (1, 2):
            raise ValueError("zeta exponents limited to halves")
        jj = int(j * zd)
        zs = zd // self.zden
        return ZetaQSeries(self.den, self.trunc,
                           {k: {jz * zs + jj: c for jz, c in z.items()}
                            for k, z in self.coeffs.items()}, zden=zd)

    def q_shift(self, exponent) -> "ZetaQSeries":
        e = Fraction(exponent)
        d = lcm(self.den, e.denominator)
        s = d // self.den
        ke = int(e * d)
        return ZetaQSeries(d, self.trunc * s + ke,
                           {k * s + ke: z for k, z in self.coeffs.items()}, zden=self.zden)

    def invert(self) -> "ZetaQSeries":
        if not self.coeffs:
            raise NonUnitLeadingTerm("cannot invert a series with no known nonzero term")
        v = min(self.coeffs)
        lead = self.coeffs[v]
        if len(lead) != 1:
            raise NonUnitLeadingTerm(
                "leading q-coefficient must be a zeta-monomial to invert in the annulus")
        (j0, c0), = lead.items()
        rel = self.trunc - v
        c0inv = c0.inverse()
        # normalize: a = c0 q^v zeta^j0 (1 + u)
        a: Dict[int, Dict[int, ExactScalar]] = {}
        for k, z in self.coeffs.items():
            a[k - v] = {j - j0: c * c0inv for j, c in z.items()}
        b: Dict[int, Dict[int, ExactScalar]] = {0: {0: ES_ONE}}
        akeys = sorted(k for k in a if k > 0)
        for k in range(1, rel):
            acc: Dict[int, ExactScalar] = {}
            for ka in akeys:
                if ka > k:
                    break
                bz = b.get(k - ka)
                if bz:
                    _zp_add_into(acc, _zp_mul(a[ka], bz))
            if acc:
                b[k] = {j: -c for j, c in acc.items()}
        out = {k - v: {j - j0: c * c0inv for j, c in z.items()} for k, z in b.items()}
        return ZetaQSeries(self.den, rel - v, out, zden=self.zden)

    def __pow__(self, e: int) -> "ZetaQSeries":
        if e == 0:
            return ZetaQSeries.one(self.trunc, self.den)
        base = self if e > 0 else self.invert()
        e = abs(e)
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def zeta_substitute_inverse(self) -> "ZetaQSeries":
        """zeta -> 1/zeta."""
        return ZetaQSeries(self.den, self.trunc,
                           {k: {-j: c for j, c in z.items()} for k, z in self.coeffs.items()},
                           zden=self.zden, _normalized=True)

    def truncate(self, trunc_exp) -> "ZetaQSeries":
        e = Fraction(trunc_exp)
        d = lcm(self.den, e.denominator)
        s = d // self.den
        t = min(self.trunc * s, int(e * d))
        return ZetaQSeries(d, t, {k * s: z for k, z in self.coeffs.items()}, zden=self.zden)

    # -- comparisons ---------------------------------------------------------

    def first_mismatch(self, other: "ZetaQSeries") -> Optional[Fraction]:
        d = lcm(self.den, other.den)
        zd = max(self.zden, other.zden)
        t = min(self.trunc * (d // self.den), other.trunc * (d // other.den))
        a, b = self._on_lattice(d, zd), other._on_lattice(d, zd)
        for k in sorted(set(a) | set(b)):
            if k >= t:
                break
            za, zb = a.get(k, {}), b.get(k, {})
            for j in set(za) | set(zb):
                if za.get(j, ES_ZERO) != zb.get(j, ES_ZERO):
                    return Fraction(k, d)
        return None

    def assert_equal(self, other: "ZetaQSeries", what: str = "") -> None:
        bad = self.first_mismatch(other)
        if bad is not None:
            raise MismatchAtOrder(bad, f"{what + ': ' if what else ''}first mismatch at q^({bad})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZetaQSeries):
            return NotImplemented
        return (self.den == other.den and self.zden == other.zden
                and self.trunc == other.trunc and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        nterms = sum(len(z) for z in self.coeffs.values())
        return (f"ZetaQSeries[den={self.den}, zden={self.zden}, "
                f"{nterms} terms + O(q^({self.trunc_exp}))]")


# ---------------------------------------------------------------------------
# Classical building blocks
# ---------------------------------------------------------------------------


def eta_qexp(T: int) -> QSeries:
    """Dedekind eta: q^(1/24) prod_{k>=1} (1 - q^k), known modulo q^T.

    Exponents lie in 1/24 + Z; the nonzero coefficients are +-1 at the
    pentagonal numbers.  Expanded directly via the pentagonal number
    theorem (equivalent to multiplying out the product).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    coeffs: Dict[int, ExactScalar] = {}
    k = 0
    while True:
        for kk in ((k, k) if k == 0 else (k, -k)):
            e = 24 * (kk * (3 * kk - 1) // 2) + 1  # exponent on the 1/24 lattice
            if e < 24 * T:
                coeffs[e] = ES_ONE if kk % 2 == 0 else -ES_ONE
        if k * (3 * k - 1) // 2 >= T and k * (3 * k + 1) // 2 >= T:
            break
        k += 1
    return QSeries(24, 24 * T, coeffs)


def eta_product_raw(T: int, factors: int) -> QSeries:
    """prod_{k=1}^{factors} (1 - q^k) mod q^T, by brute-force multiplication.

    Test oracle for :func:`eta_qexp`; kept here so the CLI can expose it.
    """
    acc = QSeries.one(T)
    for k in range(1, min(factors, T) + 1):
        acc = acc * QSeries(1, T, {0: ES_ONE, k: -ES_ONE})
    return acc


def partition_qexp(T: int) -> QSeries:
    """Generating function of partitions: 1 / prod (1-q^k) mod q^T."""
    return eta_product_raw(T, T).invert()


def eta_quotient(spec, T: int) -> QSeries:
    """prod_i eta(s_i * tau)^{e_i}, known modulo q^T.

    ``spec`` is an iterable of (scale, exponent) pairs with positive integer
    scales and integer exponents.  The fractional leading exponent
    sum_i e_i s_i / 24 is tracked exactly; internal working orders are
    raised so the result is valid modulo q^T even when inverse powers shift
    the valuation down.
    """
    spec = [(int(s), int(e)) for s, e in spec]
    for s, _ in spec:
        if s < 1:
            raise ValueError("scales must be >= 1")
    val = sum(Fraction(e * s, 24) for s, e in spec)
    rel = T - val  # relative precision needed
    if rel <= 0:
        raise ValueError("truncation order lies below the leading exponent")
    acc = None
    for s, e in spec:
        if e == 0:
            continue
        base_T = int(Fraction(s, 24) + rel) + 1
        f = eta_qexp(base_T).substitute_scale(s) ** e
        acc = f if acc is None else acc * f
    if acc is None:
        acc = QSeries.one(T)
    if acc.trunc_exp < T:
        raise AssertionError("internal working order too small for eta_quotient")
    return acc.truncate(T)


def coeff_extract(f: ZetaQSeries, ell) -> QSeries:
    """The zeta^ell Laurent coefficient of a two-variable series."""
    ell = Fraction(ell)
    jj = ell * f.zden
    out: Dict[int, ExactScalar] = {}
    if jj.denominator == 1:
        j = int(jj)
        for k, z in f.coeffs.items():
            c = z.get(j)
            if c is not None:
                out[k] = c
    return QSeries(f.den, f.trunc, out)


# ---------------------------------------------------------------------------
# JSON serialization (exact round-trip)
# ---------------------------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    return str(x)


def series_to_json(f) -> dict:
    """Serialize a QSeries or ZetaQSeries to a JSON-safe dict.

    Rationals are encoded as exact "p/q" strings so the round-trip is
    lossless; floats never appear.
    """
    if isinstance(f, QSeries):
        return {
            "kind": "qseries",
            "den": f.den,
            "trunc": f.trunc,
            "terms": [[k, _frac_str(c.re), _frac_str(c.im), c.pi_exp]
                      for k, c in sorted(f.coeffs.items())],
        }
    if isinstance(f, ZetaQSeries):
        terms = []
        for k in sorted(f.coeffs):
            for j in sorted(f.coeffs[k]):
                c = f.coeffs[k][j]
                terms.append([k, j, _frac_str(c.re), _frac_str(c.im), c.pi_exp])
        return {
            "kind": "zetaqseries",
            "den": f.den,
            "zden": f.zden,
            "trunc": f.trunc,
            "terms": terms,
        }
    raise TypeError(f"not a series: {type(f)!r}")


def series_from_json(d: dict):
    kind = d.get("kind", "qseries")
    if kind == "qseries":
        coeffs = {int(k): ExactScalar(Fraction(re), Fraction(im), int(pe))
                  for k, re, im, pe in d["terms"]}
        return QSeries(int(d["den"]), int(d["trunc"]), coeffs)
    if kind == "zetaqseries":
        coeffs: Dict[int, Dict[int, ExactScalar]] = {}
        for k, j, re, im, pe in d["terms"]:
            coeffs.setdefault(int(k), {})[int(j)] = ExactScalar(Fraction(re), Fraction(im), int(pe))
        return ZetaQSeries(int(d["den"]), int(d["trunc"]), coeffs, zden=int(d.get("zden", 1)))
    raise ValueError(f"unknown series kind {kind!r}")


def series_json_dumps(f) -> str:
    return json.dumps(series_to_json(f), sort_keys=True)


def series_json_loads(s: str):
    return series_from_json(json.loads(s))
