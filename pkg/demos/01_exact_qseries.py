"""
Exact q-series arithmetic
=========================

Truncated series in fractional powers of q with exact coefficients:
Dedekind eta, the partition generating function, eta quotients.
"""

from fractions import Fraction

from maasskit import eta_qexp, eta_quotient, partition_qexp, series_to_json

# Dedekind eta = q^(1/24) prod (1 - q^k): the nonzero coefficients sit at
# 1/24 + pentagonal numbers with signs +-1.
eta = eta_qexp(30)
print("eta(tau) =")
for e, c in eta.terms()[:7]:
    print(f"   {c!r} * q^({e})")

# Inverting the Euler product counts partitions: 1, 1, 2, 3, 5, 7, 11, ...
p = partition_qexp(12)
print("\npartition numbers:", [int(p.coeff(k).re) for k in range(12)])

# eta(2 tau)^2/eta(tau) is a theta-like eta quotient with exponent 1/8;
# its expansion has coefficient 1 at every exponent 1/8 + k(k+1)/2.
f = eta_quotient([(2, 2), (1, -1)], 20)
print("\neta(2t)^2/eta(t):")
for e, c in f.terms()[:5]:
    print(f"   {c!r} * q^({e})")

# Series round-trip exactly through JSON (rationals as strings).
doc = series_to_json(f)
print("\nJSON terms (first 3):", doc["terms"][:3])

# eta^3: odd numbers with alternating signs at exponents (2j+1)^2/8.
e3 = eta ** 3
print("\neta^3 coefficients:", [(str(e), str(c.re)) for e, c in e3.terms()[:5]])

# The ring is exact: (eta^3) * (eta^-3) is exactly 1.
check = e3 * e3.invert()
assert check.coeff(0).re == Fraction(1) and len(check.coeffs) == 1
print("\neta^3 * eta^(-3) == 1 exactly:", True)
