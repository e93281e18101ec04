"""
Character expansions and quasimodular Laurent coefficients
==========================================================

The two-variable generating function of the specialized characters, its
single characters, the Jacobi triple product as an exact identity, and
the Laurent coefficients of the meromorphic theta quotient with their
closed eta-quotient forms.
"""

from fractions import Fraction

from maasskit import chF_expansion, coeff_extract, tr_character
from maasskit.characters import (
    dtilde,
    dtilde_closed_form,
    jacobi_theta_product,
    jacobi_theta_sum,
    phi_shift_consistency,
    theta_quotient_log_derivatives,
)

# The generating function chF(zeta, q) for (m, n) = (4, 2), expanded in the
# annulus |q|^(1/2) < |zeta| < |q|^(-1/2).  Low-order coefficients:
f = chF_expansion(4, 2, 8)
print("[zeta^0 q^0] chF =", f.zeta_coeff(0, 0))
print("[zeta^1 q^(1/2)] chF =", f.zeta_coeff(Fraction(1, 2), 1), " (= m + n)")
print("[zeta^0 q^1] chF =", f.zeta_coeff(1, 0), " (= (m+n)^2)")

# A specialized character: chF_0 times the Euler product.
tr = tr_character(4, 2, 0, 10)
print("\ntr q^{L_0} (m=4, n=2, ell=0):",
      [int(tr.coeff(k).re) for k in range(8)])

# The zeta <-> 1/zeta symmetry makes ell and -ell characters equal.
assert coeff_extract(f, 2).first_mismatch(coeff_extract(f, -2)) is None
print("chF_2 == chF_{-2}: True")

# Jacobi triple product: theta sum form == product form, exactly.
assert jacobi_theta_sum(20).first_mismatch(jacobi_theta_product(20)) is None
print("\ntriple product identity exact to q^20: True")

# chF is the z -> z + tau/2 shift of theta(z+1/2)^m/theta(z)^n (up to
# elementary factors); verified as an exact two-variable identity.
print(phi_shift_consistency(4, 2, 14))

# Laurent coefficients of the theta quotient at its pole: for n = 2 the
# only one is Dtilde_2 = -2^m eta(2t)^{2m}/eta(t)^{m+6}.
d2 = dtilde(4, 2, 1, 10)
assert d2.first_mismatch(dtilde_closed_form(4, 2, 1, 10)) is None
print("\nDtilde_2 (m=4):")
for e, c in d2.terms()[:4]:
    print(f"   {c!r} * q^({e})")

# For n = 4 there are two coefficients; Dtilde_2 mixes E2(tau) and E2(2tau).
for j in (2, 1):
    assert dtilde(6, 4, j, 10).first_mismatch(dtilde_closed_form(6, 4, j, 10)) is None
print("n=4 closed forms (m=6) exact: True")

# The log-derivative identities behind those closed forms.
t1, t2 = theta_quotient_log_derivatives(10)
print("\n(2 pi i)^-2 theta''(1/2)/theta(1/2) starts", t1.coeff(0), "+", t1.coeff(1), "q")
print("(2 pi i)^-2 theta*''(0)/theta*(0) starts", t2.coeff(0), "+", t2.coeff(1), "q")
