"""Symmetrisation, the distinguisher polynomials p_w, and their truncation bounds.

The exact-weight test Q_w on K observed bits symmetrises to a univariate
polynomial p_w of degree K in the coordinate t = 1 - 2h/n.  Its value at a
grid point is the hypergeometric probability

    p_w(1 - 2h/n) = C(K, w) C(n-K, h-w) / C(n, h),

it vanishes at the K grid points nearest the ends where that probability is
structurally zero, and it therefore factors as C_w * prod_{z in Z_w} (t - z).
The leading constant is recovered from a single nonzero grid value and then
*certified* against every grid point, which subsumes any closed form.

Truncating the Chebyshev expansion of p_w below index k gives the low-degree
approximant q_w; the sup-norm of the difference is certified by exact root
isolation and compared against the explicit bound 4 sqrt(K) exp(-k^2/1156K).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .boolcube import ParityPoly, kravchuk
from .certify import poly_nonneg_on, sup_norm_certified
from .errors import PropertyViolation
from .ratpoly import (
    ChebyshevExpansion,
    RationalPoly,
    cheb_transform_factored,
    cheb_truncate,
)

_CUBE_CAP = 24


def hypergeom_prob(n: int, K: int, w: int, h: int) -> Fraction:
    """Pr[exactly w ones among K fixed coordinates | total weight h]."""
    if h < w or h - w > n - K:
        return Fraction(0)
    return Fraction(comb(K, w) * comb(n - K, h - w), comb(n, h))


def weight_grid(n: int) -> tuple[Fraction, ...]:
    """t_h = 1 - 2h/n for h = 0..n (descending from 1 to -1)."""
    return tuple(Fraction(n - 2 * h, n) for h in range(n + 1))


def symmetrize(f, n: int) -> RationalPoly:
    """Unique low-degree univariate P with P(1 - 2h/n) = E_{|x|=h}[f(x)].

    ``f`` may be a ParityPoly, a callable on 0/1 tuples, or a length-(n+1)
    weight-value vector.  Exact Lagrange interpolation through the n+1
    averaged values; the result automatically has degree at most the total
    degree of f.
    """
    averages = _weight_averages(f, n)
    return _lagrange(weight_grid(n), averages)


def _weight_averages(f, n: int) -> list[Fraction]:
    if isinstance(f, ParityPoly):
        if f.n != n:
            raise ValueError("mismatched n")
        by_size: dict[int, Fraction] = {}
        for s, c in f.coeffs.items():
            r = s.bit_count()
            by_size[r] = by_size.get(r, Fraction(0)) + c
        # E_{|x|=h}[chi_S] = kravchuk(n, h, |S|) / C(n, h)
        return [
            sum(
                (c * kravchuk(n, h, r) for r, c in by_size.items()),
                Fraction(0),
            )
            / comb(n, h)
            for h in range(n + 1)
        ]
    if callable(f):
        if n > _CUBE_CAP:
            raise ValueError(f"black-box symmetrisation capped at n <= {_CUBE_CAP}")
        sums = [Fraction(0)] * (n + 1)
        from .boolcube import mask_to_bits

        for m in range(1 << n):
            sums[m.bit_count()] += Fraction(f(mask_to_bits(n, m)))
        return [s / comb(n, h) for h, s in enumerate(sums)]
    values = [Fraction(v) for v in f]
    if len(values) != n + 1:
        raise ValueError("weight-value vector must have length n+1")
    return values


def _lagrange(points, values) -> RationalPoly:
    full = RationalPoly.from_roots(points)
    acc = RationalPoly()
    for p_i, y_i in zip(points, values):
        if y_i == 0:
            continue
        basis = _divide_linear(full, p_i)
        acc = acc + basis * (Fraction(y_i) / basis(p_i))
    return acc


def _divide_linear(p: RationalPoly, r: Fraction) -> RationalPoly:
    """p / (t - r) by synthetic division (remainder must vanish)."""
    out = [Fraction(0)] * p.degree
    carry = Fraction(0)
    for i in range(p.degree, 0, -1):
        carry = p.coeffs[i] + carry * r
        out[i - 1] = carry
    assert p.coeffs[0] + carry * r == 0, "not a root"
    return RationalPoly.from_coeffs(out)


@dataclass(frozen=True)
class SymmetrizedTest:
    """p_w in product form: scale * prod (t - z), certified on the whole grid."""

    n: int
    K: int
    w: int
    scale: Fraction  # the constant C_w
    zeros: tuple[Fraction, ...]
    poly: RationalPoly

    def grid_value(self, h: int) -> Fraction:
        return hypergeom_prob(self.n, self.K, self.w, h)

    def cheb(self) -> ChebyshevExpansion:
        return cheb_transform_factored(self.zeros, self.scale)

    def generating_poly(self) -> RationalPoly:
        """The ordinary polynomial C_w prod (s^2 - 2 s z + 1)/2 of degree 2K.

        Its coefficient at index K + d is the Chebyshev coefficient c_d of
        p_w (it is s^K times the Laurent product behind the transform).
        """
        g = RationalPoly.of(self.scale)
        for z in self.zeros:
            g = g * RationalPoly.of(Fraction(1, 2), -z, Fraction(1, 2))
        return g


def exact_weight_test(n: int, K: int, w: int) -> SymmetrizedTest:
    """Construct p_w from its zero set and certify it at every grid point."""
    if not 0 <= w <= K <= n:
        raise ValueError("need 0 <= w <= K <= n")
    z_minus = [Fraction(-(n - 2 * h), n) for h in range(K - w)]
    z_plus = [Fraction(n - 2 * h, n) for h in range(w)]
    zeros = tuple(z_minus + z_plus)
    anchor_h = w  # hypergeometric value C(K,w)/C(n,w) is never zero there
    anchor_t = Fraction(n - 2 * anchor_h, n)
    monic = RationalPoly.from_roots(zeros)
    denom = monic(anchor_t)
    assert denom != 0, "anchor collided with a zero"
    scale = hypergeom_prob(n, K, w, anchor_h) / denom
    poly = scale * monic
    for h in range(n + 1):
        expected = hypergeom_prob(n, K, w, h)
        if poly(Fraction(n - 2 * h, n)) != expected:
            raise PropertyViolation(
                f"product form disagrees with the hypergeometric value at h={h} "
                f"(n={n}, K={K}, w={w})"
            )
    return SymmetrizedTest(n=n, K=K, w=w, scale=scale, zeros=zeros, poly=poly)


def reflection_check(test: SymmetrizedTest) -> bool:
    """Exact reflection identity p_w(t) = p_{K-w}(-t).

    Under t = 1 - 2h/n, complementing the string swaps w with K - w and sends
    t to -t; this is the reflection that holds exactly (the (1-t) variant does
    not, see the repository notes), and it is checked both coefficientwise and
    on the full grid.
    """
    partner = exact_weight_test(test.n, test.K, test.K - test.w)
    if test.poly != partner.poly.reflect():
        return False
    return all(
        test.poly(t) == partner.poly(-t) for t in weight_grid(test.n)
    )


def bounded_check(test: SymmetrizedTest, grid_size: int = 2048) -> float:
    """Certify |p_w| <= 2 on [-1, 1]; returns the dense-grid maximum as a float.

    The grid maximum is a lower estimate; the certificate is the exact
    nonnegativity of 4 - p_w^2 via root isolation.
    """
    if grid_size < 1000:
        raise ValueError("grid_size must be at least 10^3")
    if test.n < 64 * test.K:
        warnings.warn(
            f"n={test.n} < 64K={64 * test.K}: outside the guaranteed range, "
            "running the check anyway",
            stacklevel=2,
        )
    p = test.poly
    grid_max = max(
        abs(p.eval_float(-1.0 + 2.0 * i / grid_size)) for i in range(grid_size + 1)
    )
    four_minus_sq = RationalPoly.of(4) - p * p
    if not poly_nonneg_on(four_minus_sq, -1, 1):
        raise PropertyViolation(
            f"|p_w| exceeds 2 on [-1,1] for (n,K,w)=({test.n},{test.K},{test.w})"
        )
    return grid_max


def truncation_error_bound(K: int, k: int) -> float:
    """The explicit truncation bound 4 sqrt(K) exp(-k^2 / 1156K)."""
    return 4.0 * math.sqrt(K) * math.exp(-(k * k) / (1156.0 * K))


def truncated_approximant(
    test: SymmetrizedTest, k: int
) -> tuple[RationalPoly, float, float]:
    """Truncated approximant q_w plus (error bound, certified sup error).

    q_w keeps the Chebyshev indices |d| < k; the certified error is an exact
    upper bound on sup |p_w - q_w| over [-1, 1] and is asserted to be at most
    the explicit bound.
    """
    if test.n < 64 * test.K:
        warnings.warn(
            f"n={test.n} < 64K={64 * test.K}: the error bound is only "
            "guaranteed in range; certifying anyway",
            stacklevel=2,
        )
    expansion = test.cheb()
    q = cheb_truncate(expansion, k)
    diff = test.poly - q
    bound = truncation_error_bound(test.K, k)
    if diff.is_zero():
        return q, bound, 0.0
    _, upper = sup_norm_certified(diff, -1, 1)
    if upper > Fraction(bound):
        raise PropertyViolation(
            f"certified truncation error {float(upper)} exceeds the bound {bound} "
            f"for (n,K,w,k)=({test.n},{test.K},{test.w},{k})"
        )
    return q, bound, float(upper)


@dataclass(frozen=True)
class AmplificationParams:
    """Amplification parameters: delta = eps^2 / (2 (1 + eps)), plus a theta grid."""

    epsilon: Fraction
    thetas: tuple[float, ...]

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @property
    def delta(self) -> Fraction:
        e = self.epsilon
        return e * e / (2 * (1 + e))

    @staticmethod
    def with_grid(epsilon, points: int = 64) -> "AmplificationParams":
        thetas = tuple(
            -math.pi + 2.0 * math.pi * j / points for j in range(points)
        )
        return AmplificationParams(Fraction(epsilon), thetas)


def shifted_square(s, z, delta) -> Fraction:
    """(s - z)^2 + delta (1 - z^2)."""
    s, z, delta = Fraction(s), Fraction(z), Fraction(delta)
    return (s - z) ** 2 + delta * (1 - z * z)


def _eval_abs_squared_exact(g: RationalPoly, re: float, im: float) -> Fraction:
    """|g(re + i im)|^2 with the float input taken as an exact rational pair."""
    re, im = Fraction(re), Fraction(im)
    acc_re, acc_im = Fraction(0), Fraction(0)
    for c in reversed(g.coeffs):
        acc_re, acc_im = acc_re * re - acc_im * im + c, acc_re * im + acc_im * re
    return acc_re * acc_re + acc_im * acc_im


def circle_identity_check(test: SymmetrizedTest, params: AmplificationParams) -> float:
    """Two-route check of the amplified circle identity; returns max rel. error.

    Route A evaluates |g((1+eps) e^{i theta})|^2 on the expanded degree-2K
    polynomial g; route B evaluates the product formula (1+eps)^{2K}
    (1+delta)^{2K} C_w^2 prod h_{delta'}(cos theta / (1+delta), z) with
    delta' = delta (2+delta)/(1+delta)^2.  Route A runs in complex doubles
    and is refined with exact arithmetic at angles where the circle passes
    close to the clustered roots (plain Horner loses ~condition * ulp there);
    the refinement only sharpens the evaluation, the routes stay independent.
    """
    g = test.generating_poly()
    eps = float(params.epsilon)
    delta = float(params.delta)
    # exact per-factor identity: |(s^2 - 2sz + 1)/2|^2 =
    #   (1+eps)^2 ((cos theta - (1+delta) z)^2 + (1 - z^2)(2 delta + delta^2)),
    # i.e. after rescaling by (1+delta)^2 the h-subscript is
    # delta (2+delta)/(1+delta)^2; the (1+delta)-inflated subscript that is
    # sometimes quoted fails at relative error ~delta (see the test suite)
    dprime = delta * (2.0 + delta) / (1.0 + delta) ** 2
    K = test.K
    cw2 = float(test.scale) ** 2
    prefactor = (1.0 + eps) ** (2 * K) * (1.0 + delta) ** (2 * K) * cw2
    zs = [float(z) for z in test.zeros]
    worst = 0.0
    for theta in params.thetas:
        s = (1.0 + eps) * cmath.exp(1j * theta)
        lhs = abs(g.eval_complex(s)) ** 2
        c = math.cos(theta) / (1.0 + delta)
        rhs = prefactor
        for z in zs:
            rhs *= (c - z) ** 2 + dprime * (1.0 - z * z)
        rel = abs(lhs - rhs) / rhs
        if rel > 1e-10:
            lhs = float(_eval_abs_squared_exact(g, s.real, s.imag))
            rel = abs(lhs - rhs) / rhs
        worst = max(worst, rel)
    return worst


def _exp_lower(x: Fraction, terms: int = 12) -> Fraction:
    """Truncated exponential series; a rational lower bound on e^x for x >= 0."""
    acc = Fraction(1)
    term = Fraction(1)
    for i in range(1, terms + 1):
        term = term * x / i
        acc += term
    return acc


def shifted_product_check(test: SymmetrizedTest, delta, grid) -> bool:
    """Grid check of C_w^2 prod shifted_square(s, z) <= e^{65 delta K} * cap(s).

    cap(s) is p_w(|s|)^2 for |s| <= 1 - w/16K and 1 beyond; requires
    w <= K/2.  The negative half-line is always reduced to |s| (the product
    only grows under s -> |s| for these zero sets), since the raw p_w(s)^2
    version fails near negative zeros where the delta (1 - z^2) floor keeps
    the product positive while p_w vanishes.  Left-hand sides are exact
    rationals; the exponential is handled by a rational lower bound first and
    a float comparison as a fallback, so the delta = 0 equality case stays
    exact.
    """
    if 2 * test.w > test.K:
        raise ValueError("claim applies for w <= K/2")
    if test.n < 64 * test.K:
        warnings.warn("n < 64K: outside the guaranteed range", stacklevel=2)
    delta = Fraction(delta)
    K, w = test.K, test.w
    cut = 1 - Fraction(w, 16 * K) if w else Fraction(1)
    cw2 = test.scale * test.scale
    exponent = 65 * delta * K
    exp_low = _exp_lower(exponent)
    exp_float = math.exp(float(exponent))
    for s in grid:
        s = Fraction(s)
        if abs(s) > 1:
            raise ValueError("grid must lie in [-1, 1]")
        lhs = cw2
        for z in test.zeros:
            lhs *= shifted_square(s, z, delta)
        cap = test.poly(abs(s)) ** 2 if abs(s) <= cut else Fraction(1)
        if lhs <= exp_low * cap:
            continue
        if float(lhs) <= exp_float * float(cap) * (1.0 + 1e-12):
            continue
        return False
    return True


def indistinguishability_bound(k: int, K: int) -> float:
    """Explicit proof-level constant (K+1) * 8 sqrt(K) * exp(-k^2/1156K).

    The K-bit distinguisher decomposes into at most K+1 exact-weight tests,
    each contributing 8 sqrt(K) exp(-k^2/1156K) of advantage.  The guarantee
    is stated for 1 <= k < K <= n/64; the formula itself is evaluated for any
    positive k, K (downstream consolidation plugs in k >= K).
    """
    if k < 1 or K < 1:
        raise ValueError("need positive k and K")
    return (K + 1) * 8.0 * math.sqrt(K) * math.exp(-(k * k) / (1156.0 * K))
