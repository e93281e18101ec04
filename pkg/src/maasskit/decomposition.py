"""Finite/polar decomposition of the meromorphic theta quotient.

For even m > n >= 2 the Jacobi form phi(z;tau) = theta(z+1/2)^m/theta(z)^n
(poles of order n on Z tau + Z) splits canonically as

    phi = phi^F + phi^P,

where phi^F = sum over ell mod (m-n) of h_ell(tau) theta_{(m-n)/2,ell}(z)
collects the Fourier coefficients taken on canonical contours, and the
polar part phi^P is built from the Laurent coefficients Dtilde_{2j} of
phi at its pole together with epsilon-derivatives of the level-(m-n)/2
Appell sums f_eps.  Completing both sides with the nonholomorphic kernels
R_{(m-n)/2,ell} produces objects with genuine Jacobi transformation laws;
the added terms cancel between the completed finite and polar parts, so
the completed sum still reproduces phi.

Derivative conventions: the index-preserving operator is
D_eps = delta_eps - (m-n) Im(eps)/Im(tau) with
delta_eps = (1/2 pi i) d/d eps, and d/d eps is the Wirtinger derivative
(d/dx - i d/dy)/2.  Iterates of D_eps on the real-analytic kernels are
computed by central finite differences on a small (x, y) grid after
normal-ordering the operator symbolically; on holomorphic targets (the
f_eps sums, phi itself) derivatives use spectrally accurate Cauchy-circle
quadrature instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import mpmath as mp

from .complexeval import (
    ModularMatrix,
    PoleOnLattice,
    R_Ml_num,
    R_num,
    TauPoint,
    f_M_num,
    lattice_distance,
    mu_hat_num,
    mu_num,
    phi_num,
    theta_ab_num,
    theta_num,
)

__all__ = [
    "DecompositionContext",
    "HCoefficient",
    "PoleTooClose",
    "StepUnderflow",
    "h_ell_contour",
    "phiF_partial",
    "phiP_eval",
    "phi_direct",
    "dtilde_num",
    "d_num",
    "residue_check",
    "dop_apply",
    "dop_apply_steps",
    "depsilon_explicit",
    "calR_num",
    "raise_op",
    "rewrite_dop_rhs",
    "h_hat",
    "phiF_hat",
    "phiP_hat",
    "mu_completion_bridge",
]


class PoleTooClose(ArithmeticError):
    """A contour or circle cannot be placed: a pole is too close."""


class StepUnderflow(ArithmeticError):
    """Finite-difference step size underflowed the working precision."""


@dataclass(frozen=True)
class HCoefficient:
    """One theta-decomposition coefficient, reduced to the canonical range."""

    ell: int
    value: complex
    variant: str = "canonical"  # raw(z0) | canonical | completed


class DecompositionContext:
    """Immutable parameters plus memoized evaluations for one (m, n, tau).

    rho is the epsilon-contour radius for Cauchy derivatives at 0; it must
    stay strictly inside the pole lattice of phi(eps), so rho < min(1, |tau|,
    |tau -+ 1|).  ntheta bounds the lambda-window of theta_{M,ell} sums only
    indirectly (the evaluators pick their own certified windows).
    """

    def __init__(self, m: int, n: int, tau, digits: int = 30,
                 circle_points: Optional[int] = None, rho_factor: float = 0.45):
        if m % 2 or n % 2 or not m > n >= 2:
            raise ValueError("requires even m > n >= 2")
        self.m = m
        self.n = n
        self.tau_point = TauPoint.of(tau)
        self.digits = digits
        with mp.workdps(digits + 15):
            self.tau = self.tau_point.mpc()
            nearest = lattice_distance(mp.mpc(0), self.tau, exclude_origin=True)
            self.rho = rho_factor * float(nearest)
        if circle_points is None:
            # keep circle aliasing ~ (rho/nearest)^(P - n) below the target
            circle_points = int(math.ceil(
                (digits + 8) * math.log(10) / math.log(1.0 / rho_factor))) + 2 * n + 8
        self.circle_points = max(circle_points, 32)
        if self.rho <= 1e-6:
            raise PoleTooClose("epsilon contour radius underflows")
        self._phi_circle: Optional[List[mp.mpc]] = None
        self._h_cache: Dict[int, mp.mpc] = {}
        self._dtilde_cache: Dict[int, mp.mpc] = {}
        self._dop_cache: Dict[Tuple[int, int], mp.mpc] = {}

    # -- derived quantities ------------------------------------------------

    @property
    def M(self) -> int:
        """Jacobi index (m - n)/2."""
        return (self.m - self.n) // 2

    @property
    def v(self):
        return self.tau.imag

    def workdps(self):
        return mp.workdps(self.digits + 15)

    # -- phi and its Laurent data -------------------------------------------

    def phi(self, z):
        return phi_num(z, self.tau, self.m, self.n, self.digits)

    def phi_circle(self) -> List[mp.mpc]:
        """phi sampled on the Cauchy circle |eps| = rho (cached)."""
        if self._phi_circle is None:
            with self.workdps():
                P = self.circle_points
                vals = []
                for p in range(P):
                    eps = self.rho * mp.expjpi(mp.mpf(2 * p) / P)
                    vals.append(self.phi(eps))
                self._phi_circle = vals
        return self._phi_circle

    def dtilde(self, j: int):
        """Dtilde_{2j}(tau) = (2 pi i)^{2j} [eps^{-2j}]-Laurent coefficient of phi."""
        if j not in self._dtilde_cache:
            with self.workdps():
                P = self.circle_points
                vals = self.phi_circle()
                acc = mp.mpc(0)
                for p, val in enumerate(vals):
                    acc += val * mp.expjpi(mp.mpf(2 * p) / P * 2 * j)
                acc *= mp.mpf(self.rho) ** (2 * j) / P
                self._dtilde_cache[j] = (2j * mp.pi) ** (2 * j) * acc
        return self._dtilde_cache[j]

    def d_almost_hol(self, r: int):
        """D_r(tau) = sum_j (-1)^j Dtilde_{2j+r}/j! ((m-n)/(8 pi v))^j."""
        with self.workdps():
            total = mp.mpc(0)
            fact = mp.mpf(1)
            for j in range(0, (self.n - r) // 2 + 1):
                if j:
                    fact *= j
                total += ((-1) ** j * self.dtilde((2 * j + r) // 2) / fact
                          * (mp.mpf(self.m - self.n) / (8 * mp.pi * self.v)) ** j)
        return +total

    # -- D_eps^{2j-1}[R_{M,ell}] at 0, cached per (ell, j) --------------------

    def dop_R(self, ell: int, j: int):
        key = (ell % (2 * self.M), 2 * j - 1)
        if key not in self._dop_cache:
            target = lambda eps: R_Ml_num(self.M, key[0], eps, self.tau, self.digits + 5)
            self._dop_cache[key] = dop_apply(self, key[1], target)
        return self._dop_cache[key]


# ---------------------------------------------------------------------------
# Fourier coefficients by contour integration
# ---------------------------------------------------------------------------


def _trapezoid_periodic(f: Callable, z0, P: int):
    """Trapezoid rule for int_{z0}^{z0+1} f, f 1-periodic and analytic."""
    acc = mp.mpc(0)
    for p in range(P):
        acc += f(z0 + mp.mpf(p) / P)
    return acc / P


def _segment_quad(f: Callable, a, b):
    return mp.quad(lambda s: f(a + s * (b - a)) * (b - a), [0, 1])


def h_ell_contour(ctx: DecompositionContext, ell: int, z0=None):
    """h_ell^{(z0)} = q^{-ell^2/(2(m-n))} int_{z0}^{z0+1} phi(z) e^{-2 pi i ell z} dz.

    Default z0
    is the canonical choice -ell tau/(m-n).  Straight path when pole-free;
    a pole at an endpoint shifts the window left by 1/4 (the poles on a row
    are integer-spaced); an interior pole is handled as the average of the
    two semicircle detours above and below.
    """
    if z0 is None:
        z0 = -ell * ctx.tau / (ctx.m - ctx.n)
    with ctx.workdps():
        z0 = mp.mpc(z0)
        tau = ctx.tau
        v = ctx.v
        mm = ctx.m - ctx.n
        integrand = lambda z: ctx.phi(z) * mp.expjpi(-2 * ell * z)

        alpha = z0.imag / v
        on_row = abs(alpha - mp.nint(alpha)) * float(v) < 1e-9
        if not on_row:
            # strip distance to the nearest pole row, in Im-units
            dist = float(abs(alpha - mp.nint(alpha)) * v)
            P = int(math.ceil((ctx.digits + 6) * math.log(10) / (2 * math.pi * dist))) + 8
            total = _trapezoid_periodic(integrand, z0, P)
        else:
            a_int = int(mp.nint(alpha))
            # poles on the row sit at a_int*tau + Z; position along the path
            x0 = z0.real - (a_int * tau).real
            frac = x0 - mp.floor(x0)
            if abs(frac) < 1e-9 or abs(frac - 1) < 1e-9:
                # endpoint pole: shift the window, then the pole is interior
                z0 = z0 - mp.mpf(1) / 4
                x0 = x0 - mp.mpf(1) / 4
                frac = x0 - mp.floor(x0)
            pole = z0 + (1 - frac)  # the unique pole inside [z0, z0+1)
            rho = min(float(frac), float(1 - frac), 0.25) / 2
            if rho < 1e-6:
                raise PoleTooClose("deformation radius underflow on the contour")
            # the two deformed paths share the straight pieces; only the
            # semicircle differs (above vs below), so average just the arcs
            total = _segment_quad(integrand, z0, pole - rho)
            total += _segment_quad(integrand, pole + rho, z0 + 1)

            def arc(theta):
                w = pole + rho * mp.exp(1j * theta)
                return integrand(w) * 1j * rho * mp.exp(1j * theta)

            total += (mp.quad(arc, [mp.pi, 0]) + mp.quad(arc, [mp.pi, 2 * mp.pi])) / 2
        out = mp.expjpi(-tau * mp.mpf(ell * ell) / mm) * total
    return +out


def h_canonical(ctx: DecompositionContext, ell: int):
    """Canonical h_ell (cached); ell is reduced mod m-n by periodicity."""
    key = ell % (ctx.m - ctx.n)
    if key not in ctx._h_cache:
        ctx._h_cache[key] = h_ell_contour(ctx, key)
    return ctx._h_cache[key]


def phiF_partial(ctx: DecompositionContext, z):
    """phi^F(z) = sum over ell mod (m-n) of h_ell theta_{(m-n)/2, ell}(z)."""
    with ctx.workdps():
        total = mp.mpc(0)
        for ell in range(ctx.m - ctx.n):
            total += h_canonical(ctx, ell) * theta_ab_num(ctx.M, ell, z, ctx.tau, ctx.digits)
    return +total


# ---------------------------------------------------------------------------
# polar part
# ---------------------------------------------------------------------------


def _cauchy_delta_derivs(ctx: DecompositionContext, g: Callable, orders: List[int],
                         rho: float) -> Dict[int, mp.mpc]:
    """delta_eps^r [g]_0 = (2 pi i)^{-r} g^{(r)}(0) for each r, by one circle.

    g must be holomorphic on |eps| <= rho; trapezoidal quadrature on the
    circle is spectrally accurate.
    """
    P = ctx.circle_points
    vals = []
    for p in range(P):
        eps = rho * mp.expjpi(mp.mpf(2 * p) / P)
        vals.append(g(eps))
    out: Dict[int, mp.mpc] = {}
    for r in orders:
        acc = mp.mpc(0)
        for p, val in enumerate(vals):
            acc += val * mp.expjpi(-mp.mpf(2 * p) / P * r)
        # (1/2 pi i) contour integral of g / eps^{r+1} gives g^{(r)}(0)/r!
        deriv_over_fact = acc / (P * mp.mpf(rho) ** r)
        fact = mp.factorial(r)
        out[r] = deriv_over_fact * fact / (2j * mp.pi) ** r
    return out


def phiP_eval(ctx: DecompositionContext, z):
    """phi^P(z) = -sum_j Dtilde_{2j}/(2j-1)! delta_eps^{2j-1}[f_eps^{(M)}(z)]_0."""
    with ctx.workdps():
        z = mp.mpc(z)
        d = lattice_distance(z, ctx.tau)
        rho = 0.45 * min(d, 1.0, float(ctx.v))
        if rho < 1e-6:
            raise PoleTooClose("z too close to the pole lattice for the eps-circle")
        g = lambda eps: f_M_num(eps, z, ctx.tau, ctx.M, ctx.digits)
        orders = [2 * j - 1 for j in range(1, ctx.n // 2 + 1)]
        derivs = _cauchy_delta_derivs(ctx, g, orders, rho)
        total = mp.mpc(0)
        for j in range(1, ctx.n // 2 + 1):
            total -= ctx.dtilde(j) / mp.factorial(2 * j - 1) * derivs[2 * j - 1]
    return +total


def phi_direct(ctx: DecompositionContext, z):
    return ctx.phi(z)


def dtilde_num(ctx: DecompositionContext, j: int):
    return ctx.dtilde(j)


def d_num(ctx: DecompositionContext, r: int):
    return ctx.d_almost_hol(r)


def residue_check(ctx: DecompositionContext, ell: int):
    """Residue of phi(eps) e^{-2 pi i ell eps} at 0, two ways.

    Returns (contour value, Laurent-data value); they must agree.
    """
    with ctx.workdps():
        P = ctx.circle_points
        acc = mp.mpc(0)
        for p in range(P):
            eps = ctx.rho * mp.expjpi(mp.mpf(2 * p) / P)
            acc += ctx.phi(eps) * mp.expjpi(-2 * ell * eps) * eps
        lhs = acc / P  # (1/2 pi i) closed-contour integral
        rhs = mp.mpc(0)
        for j in range(1, ctx.n // 2 + 1):
            rhs += (ctx.dtilde(j) / mp.factorial(2 * j - 1) * (-ell) ** (2 * j - 1)
                    / (2j * mp.pi))
    return +lhs, +rhs


# ---------------------------------------------------------------------------
# the operator D_eps on real-analytic targets (finite differences)
# ---------------------------------------------------------------------------


def _fd_weights(order: int, offsets: List[int]) -> List[Fraction]:
    """Exact central-difference weights for d^order/dx^order on offsets*h."""
    npts = len(offsets)
    # solve sum_i w_i o_i^p / p! = [p == order] for p < npts
    mat = [[Fraction(o) ** p for o in offsets] for p in range(npts)]
    rhs = [Fraction(0)] * npts
    rhs[order] = Fraction(math.factorial(order))
    # Gaussian elimination over exact rationals
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(npts):
        piv = next(r for r in range(col, npts) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(npts):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][npts] for i in range(npts)]


_STENCIL_HALF = 4  # 9-point stencils: order-(9-d) accuracy for d-th derivative


def _mixed_partials(f: Callable, h, max_order: int, digits: int) -> Dict[Tuple[int, int], mp.mpc]:
    """All mixed partials d_x^a d_y^b f(0) with a + b <= max_order.

    One (2K+1)^2 grid evaluation, then exact tensor-product central
    difference weights.
    """
    K = _STENCIL_HALF
    offs = list(range(-K, K + 1))
    grid = {}
    for i in offs:
        for jj in offs:
            grid[(i, jj)] = f(mp.mpc(i * h, jj * h))
    out: Dict[Tuple[int, int], mp.mpc] = {}
    for a in range(max_order + 1):
        wa = _fd_weights(a, offs)
        for b in range(max_order + 1 - a):
            wb = _fd_weights(b, offs)
            acc = mp.mpc(0)
            for i, wi in zip(offs, wa):
                if wi == 0:
                    continue
                for jj, wj in zip(offs, wb):
                    if wj == 0:
                        continue
                    w = wi * wj
                    acc += mp.mpf(w.numerator) / w.denominator * grid[(i, jj)]
            out[(a, b)] = acc / (mp.mpf(h) ** (a + b))
    return out


def _dop_symbol(r: int, C) -> Dict[Tuple[int, int, int], mp.mpc]:
    """Normal-ordered expansion of D_eps^r as sum c * y^p d_x^a d_y^b.

    D_eps = (1/(4 pi i)) (d_x - i d_y) - C y, with y-multiplication written
    to the left of the derivatives; composing another D_eps from the left
    uses d_y (y^p ...) = p y^{p-1} (...) + y^p d_y (...).
    """
    terms: Dict[Tuple[int, int, int], mp.mpc] = {(0, 0, 0): mp.mpc(1)}
    pref = 1 / (4j * mp.pi)
    for _ in range(r):
        new: Dict[Tuple[int, int, int], mp.mpc] = {}

        def add(key, val):
            new[key] = new.get(key, mp.mpc(0)) + val

        for (p, a, b), c in terms.items():
            add((p, a + 1, b), c * pref)            # d_x
            add((p, a, b + 1), -1j * c * pref)       # -i d_y acting on derivatives
            if p:
                add((p - 1, a, b), -1j * c * pref * p)  # -i d_y hitting y^p
            add((p + 1, a, b), -C * c)               # -C y
        terms = new
    return terms


def dop_apply(ctx: DecompositionContext, r: int, target: Callable, h=None):
    """D_eps^r [target]_{eps=0} by symbolic normal-ordering + FD partials.

    target is a real-analytic function of the complex variable eps; r is
    odd in all uses here but any r >= 1 works.  Richardson extrapolation
    over step halving removes the leading stencil error.
    """
    v_h, v_h2 = dop_apply_steps(ctx, r, target, h)
    K = _STENCIL_HALF
    p = 2 * (K + 1) - r if r % 2 == 0 else 2 * K - r + 2  # stencil order in h
    p = max(2, p - (p % 2))
    return (mp.mpf(2) ** p * v_h2 - v_h) / (mp.mpf(2) ** p - 1)


def dop_apply_steps(ctx: DecompositionContext, r: int, target: Callable, h=None):
    """The two step-halved evaluations behind dop_apply (for convergence demos)."""
    if r < 1:
        raise ValueError("derivative order must be >= 1")
    with ctx.workdps():
        if h is None:
            h = mp.mpf(10) ** (-max(3, (ctx.digits - 10) // (r + 3)))
        else:
            h = mp.mpf(h)
        if h < mp.mpf(10) ** (-(ctx.digits + 5)):
            raise StepUnderflow("finite-difference step below working precision")
        C = mp.mpf(ctx.m - ctx.n) / ctx.v
        symbol = _dop_symbol(r, C)
        orders = max(a + b for (p, a, b) in symbol if p == 0)
        out = []
        for step in (h, h / 2):
            parts = _mixed_partials(target, step, orders, ctx.digits)
            acc = mp.mpc(0)
            for (p, a, b), c in symbol.items():
                if p == 0:
                    acc += c * parts[(a, b)]
            out.append(acc)
    return out[0], out[1]


def depsilon_explicit(ctx: DecompositionContext, ell: int):
    """Closed form of D_eps[R_{(m-n)/2, ell}]_0 (theta-type sums).

    -sum_{la = ell mod (m-n)} la (sgn(la+1/2) - E(la sqrt(2v/(m-n))))
        e^{-pi i la^2 tau/(m-n)}
    + sqrt(m-n)/(pi sqrt(2v)) theta_{(m-n)/2, ell}(0; -conj(tau)).

    The sign of the lambda-sum is the one the Wirtinger derivative of the
    kernel actually produces (finite differences agree; see tests).
    """
    with ctx.workdps():
        mm = ctx.m - ctx.n
        v = ctx.v
        tot = mp.mpc(0)
        N = int(math.ceil(math.sqrt((ctx.digits + 8) * math.log(10) / (math.pi * float(v) / mm))))
        for la in range(ell - (N // (2 * ctx.M) + 2) * 2 * ctx.M,
                        ell + (N // (2 * ctx.M) + 3) * 2 * ctx.M, 2 * ctx.M):
            sgn = 1 if la + mp.mpf(1) / 2 > 0 else -1
            w = sgn - mp.erf(mp.sqrt(mp.pi) * la * mp.sqrt(2 * v / mm))
            tot -= la * w * mp.expjpi(-mp.mpf(la * la) * ctx.tau / mm)
        tot += (mp.sqrt(mm) / (mp.pi * mp.sqrt(2 * v))
                * theta_ab_num(ctx.M, ell, 0, -mp.conj(ctx.tau), ctx.digits))
    return +tot


# ---------------------------------------------------------------------------
# raising operator and the rewrite of D_eps-iterates
# ---------------------------------------------------------------------------


def raise_op(f: Callable, kappa, k: int, tau, digits: int = 30, h=None):
    """Iterated Maass raising operator R_kappa^k f at tau.

    R_kappa = 2i d/dtau + kappa/v with the Wirtinger d/dtau computed by
    central differences in u and v; weights go up by 2 per step.
    R^0 is the identity (and by convention R^{-1}(f) = 1).
    """
    if k < 0:
        return mp.mpf(1)
    with mp.workdps(digits + 10):
        tau = mp.mpc(tau)
        if h is None:
            h = mp.mpf(10) ** (-max(3, digits // 4))
        if h < mp.mpf(10) ** (-(digits + 5)):
            raise StepUnderflow("tau-derivative step below working precision")
        if k == 0:
            return f(tau)
        g = lambda t: raise_op(f, kappa, k - 1, t, digits, h)
        w = kappa + 2 * (k - 1)
        du = (g(tau + h) - g(tau - h)) / (2 * h)
        dv = (g(tau + 1j * h) - g(tau - 1j * h)) / (2 * h)
        dtau = (du - 1j * dv) / 2
        out = 2j * dtau + mp.mpf(w) / tau.imag * g(tau)
    return +out


def calR_num(ctx: DecompositionContext, ell: int, tau=None):
    """calR(tau) = Wirtinger d/d-eps [R_{(m-n)/2, ell}(eps; tau)]_{eps=0}."""
    with ctx.workdps():
        t = ctx.tau if tau is None else mp.mpc(tau)
        h = mp.mpf(10) ** (-max(3, (ctx.digits - 5) // 4))
        f = lambda e: R_Ml_num(ctx.M, ell, e, t, ctx.digits + 5)
        dx = (f(h) - f(-h)) / (2 * h)
        dx2 = (f(h / 2) - f(-h / 2)) / h
        dy = (f(1j * h) - f(-1j * h)) / (2 * h)
        dy2 = (f(1j * h / 2) - f(-1j * h / 2)) / h
        dx = (4 * dx2 - dx) / 3
        dy = (4 * dy2 - dy) / 3
    return (dx - 1j * dy) / 2


def rewrite_dop_rhs(ctx: DecompositionContext, ell: int, j: int):
    """-i (m-n)^{j-1}/(2 pi)^j R_{3/2}^{j-1}(calR)(tau).

    The closed form of D_eps^{2j-1}[R_{(m-n)/2,ell}]_0 in terms of the
    raising operator; carries the factor i that the operator calculation
    actually produces (the alpha_{r,j} expansion, evaluated at j=1, is
    (1/2 pi i) calR).
    """
    with ctx.workdps():
        g = lambda t: calR_num(ctx, ell, t)
        val = raise_op(g, mp.mpf(3) / 2, j - 1, ctx.tau, ctx.digits)
        out = -1j * mp.mpf(ctx.m - ctx.n) ** (j - 1) / (2 * mp.pi) ** j * val
    return +out


# ---------------------------------------------------------------------------
# completions
# ---------------------------------------------------------------------------


def h_hat(ctx: DecompositionContext, ell: int):
    """Completed coefficient: h_ell - (1/2) sum_j D_{2j}/(2j-1)! D_eps^{2j-1}[R_{M,ell}]_0."""
    with ctx.workdps():
        out = h_canonical(ctx, ell)
        for j in range(1, ctx.n // 2 + 1):
            out -= (ctx.d_almost_hol(2 * j) / mp.factorial(2 * j - 1)
                    * ctx.dop_R(ell, j)) / 2
    return +out


def phiF_hat(ctx: DecompositionContext, z):
    """Completed finite part: sum over ell mod (m-n) of h^_ell theta_{M,ell}(z)."""
    with ctx.workdps():
        total = mp.mpc(0)
        for ell in range(ctx.m - ctx.n):
            total += h_hat(ctx, ell) * theta_ab_num(ctx.M, ell, z, ctx.tau, ctx.digits)
    return +total


def phiP_hat(ctx: DecompositionContext, z):
    """Completed polar part: phi^P + (1/2) sum_{j, ell} D_{2j}/(2j-1)!
    D_eps^{2j-1}[R_{M,ell}]_0 theta_{M,ell}(z)."""
    with ctx.workdps():
        total = phiP_eval(ctx, z)
        for j in range(1, ctx.n // 2 + 1):
            w = ctx.d_almost_hol(2 * j) / mp.factorial(2 * j - 1) / 2
            for ell in range(ctx.m - ctx.n):
                total += (w * ctx.dop_R(ell, j)
                          * theta_ab_num(ctx.M, ell, z, ctx.tau, ctx.digits))
    return +total


def mu_completion_bridge(ctx: DecompositionContext, ell: int, eps, test_mode: bool = True):
    """The weight-1/2 seed built from the mu-completion:

        f(eps) = e^{-pi i (ell-M)^2 tau/(2M) + 2 pi i (M-ell) eps}
                 mu^(2M eps - 1/2, (M-ell) tau; 2M tau),   M = (m-n)/2.

    Defined when (M - ell) is not divisible by 2M (otherwise the second
    argument of mu^ sits on the lattice of 2M tau and mu has a pole there:
    PoleOnLattice).  In test mode the nonholomorphic part is verified to
    equal -(1/2) R_{M,ell}(eps; tau), which is the R-to-R rewrite of the
    displayed completion term.
    """
    M = ctx.M
    k = M - ell
    if k % (2 * M) == 0:
        raise PoleOnLattice(
            "mu argument (M-ell) tau lies on the 2M tau lattice; ell = M mod 2M excluded")
    with ctx.workdps():
        eps = mp.mpc(eps)
        tau = ctx.tau
        pref = mp.expjpi(-mp.mpf((ell - M) ** 2) * tau / (2 * M) + 2 * k * eps)
        z1 = 2 * M * eps - mp.mpf(1) / 2
        z2 = k * tau
        val = pref * mu_hat_num(z1, z2, 2 * M * tau, ctx.digits)
        if test_mode:
            holo = pref * mu_num(z1, z2, 2 * M * tau, ctx.digits)
            nonholo = val - holo
            want = -R_Ml_num(M, ell, eps, tau, ctx.digits) / 2
            tol = mp.mpf(10) ** (-(ctx.digits - 8))
            if abs(nonholo - want) > tol * (1 + abs(want)):
                raise ArithmeticError(
                    "nonholomorphic part of the mu-bridge does not match -(1/2) R_{M,ell}")
    return +val
