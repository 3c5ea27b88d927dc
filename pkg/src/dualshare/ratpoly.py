"""Exact univariate polynomials over Q and Chebyshev-basis machinery.

Conventions used throughout the package:

* polynomials are dense tuples of ``Fraction`` coefficients, lowest power
  first; the zero polynomial has an empty coefficient tuple;
* Chebyshev expansions are *symmetric*: ``p = sum_{d=-K}^{K} c_d T_d`` with
  ``c_{-d} = c_d`` and ``T_{-d} = T_d``.  Only the half ``c_0..c_K`` is
  stored, so ``p = c_0 + sum_{d>0} 2 c_d T_d``.  Under this convention the
  coefficients of a monic product ``prod (t - z)`` are exactly the regular
  coefficients of the Laurent polynomial ``prod (s + 1/s - 2z)/2``, which is
  the identity the factored transform uses;
* the measure ``sigma`` on [-1, 1] is the Chebyshev weight; its only facts
  used are E[T_0^2] = 1, E[T_d^2] = 1/2 for d > 0, and orthogonality, so all
  sigma inner products are computed algebraically, never by quadrature.

Floating point appears only in verification helpers (`parseval_circle_check`
and complex evaluation); every transform is exact.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalPoly:
    """Dense univariate polynomial over Q, coefficients lowest power first."""

    coeffs: tuple[Fraction, ...] = ()

    @staticmethod
    def of(*coeffs) -> "RationalPoly":
        return RationalPoly.from_coeffs(coeffs)

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "RationalPoly":
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RationalPoly(tuple(cs))

    @staticmethod
    def from_roots(roots: Iterable, scale=1) -> "RationalPoly":
        """The expanded polynomial ``scale * prod (t - z)``."""
        p = RationalPoly.from_coeffs([scale])
        for z in roots:
            p = p * RationalPoly.from_coeffs([-_frac(z), Fraction(1)])
        return p

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        """Evaluate by Horner's rule; exact for Fraction arguments."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly.from_coeffs(out)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, RationalPoly):
            if self.is_zero() or other.is_zero():
                return RationalPoly()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        if b:
                            out[i + j] += a * b
            return RationalPoly.from_coeffs(out)
        s = _frac(other)
        return RationalPoly.from_coeffs(c * s for c in self.coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalPoly":
        if n < 0:
            raise ValueError("negative power")
        out = RationalPoly.of(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "RationalPoly":
        return RationalPoly.from_coeffs(
            i * c for i, c in enumerate(self.coeffs) if i > 0
        )

    def reflect(self) -> "RationalPoly":
        """The polynomial t -> p(-t)."""
        return RationalPoly(
            tuple(-c if i & 1 else c for i, c in enumerate(self.coeffs))
        )


def eval_poly(p: RationalPoly, t) -> Fraction:
    """Exact Horner evaluation (free-function alias for ``p(t)``)."""
    return p(t)


def poly_from_roots(roots: Iterable, scale=1) -> RationalPoly:
    return RationalPoly.from_roots(roots, scale)


@dataclass(frozen=True)
class LaurentPoly:
    """Finite Laurent polynomial over Q, stored as sorted (exponent, coeff) pairs."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    @staticmethod
    def from_dict(d: dict) -> "LaurentPoly":
        return LaurentPoly(
            tuple(sorted((e, _frac(c)) for e, c in d.items() if c != 0))
        )

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def coeff(self, e: int) -> Fraction:
        for exp, c in self.terms:
            if exp == e:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def span(self) -> int:
        """Max exponent minus min exponent (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        return self.terms[-1][0] - self.terms[0][0]

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict[int, Fraction] = {}
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    e = e1 + e2
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return LaurentPoly.from_dict(out)
        s = _frac(other)
        return LaurentPoly.from_dict({e: c * s for e, c in self.terms})

    __rmul__ = __mul__

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly.from_dict(out)

    def evaluate(self, z: complex) -> complex:
        return sum(float(c) * z**e for e, c in self.terms)


def laurent_from_roots(roots: Iterable, scale=1) -> LaurentPoly:
    """The Laurent polynomial ``scale * prod (s + 1/s - 2z)/2``.

    Its regular coefficients are the symmetric Chebyshev coefficients of
    ``scale * prod (t - z)``.
    """
    g = LaurentPoly.from_dict({0: _frac(scale)})
    half = Fraction(1, 2)
    for z in roots:
        g = g * LaurentPoly.from_dict({1: half, 0: -_frac(z), -1: half})
    return g


_CHEB_CACHE: list[RationalPoly] = [RationalPoly.of(1), RationalPoly.of(0, 1)]


def cheb_T(d: int) -> RationalPoly:
    """Chebyshev polynomial T_d from T_0 = 1, T_1 = t, T_{d+1} = 2t T_d - T_{d-1}."""
    if d < 0:
        raise ValueError("index must be nonnegative")
    two_t = RationalPoly.of(0, 2)
    while len(_CHEB_CACHE) <= d:
        _CHEB_CACHE.append(two_t * _CHEB_CACHE[-1] - _CHEB_CACHE[-2])
    return _CHEB_CACHE[d]


@dataclass(frozen=True)
class ChebyshevExpansion:
    """Half-coefficients c_0..c_K of the symmetric expansion sum_{|d|<=K} c_d T_d."""

    half_coeffs: tuple[Fraction, ...] = ()

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "ChebyshevExpansion":
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return ChebyshevExpansion(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.half_coeffs) - 1

    def coeff(self, d: int) -> Fraction:
        """Symmetric accessor: c_{-d} = c_d."""
        d = abs(d)
        if d >= len(self.half_coeffs):
            return Fraction(0)
        return self.half_coeffs[d]

    def to_poly(self) -> RationalPoly:
        """Reconstruct sum_{d=-K}^{K} c_d T_d = c_0 + sum_{d>0} 2 c_d T_d."""
        acc = RationalPoly()
        for d, c in enumerate(self.half_coeffs):
            if c:
                acc = acc + cheb_T(d) * (c if d == 0 else 2 * c)
        return acc

    def truncate(self, k: int) -> RationalPoly:
        """The power-basis expansion of sum_{|d| < k} c_d T_d."""
        if k < 0:
            raise ValueError("truncation index must be nonnegative")
        acc = RationalPoly()
        for d, c in enumerate(self.half_coeffs[: max(k, 0)]):
            if c:
                acc = acc + cheb_T(d) * (c if d == 0 else 2 * c)
        return acc

    def to_laurent(self) -> LaurentPoly:
        """Two-sided Laurent polynomial sum_d c_d s^d with c_{-d} = c_d."""
        out: dict[int, Fraction] = {}
        for d, c in enumerate(self.half_coeffs):
            if c:
                out[d] = c
                if d:
                    out[-d] = c
        return LaurentPoly.from_dict(out)


def cheb_transform(p: RationalPoly) -> ChebyshevExpansion:
    """Symmetric Chebyshev expansion of ``p`` by inverting the triangular basis change.

    T_d has leading coefficient 2^{d-1} for d >= 1, so peeling from the top
    degree down is exact and needs no linear solver.
    """
    if p.is_zero():
        return ChebyshevExpansion()
    work = list(p.coeffs)
    deg = p.degree
    half = [Fraction(0)] * (deg + 1)
    for d in range(deg, 0, -1):
        a = work[d]
        if a:
            one_sided = a / Fraction(2 ** (d - 1))
            half[d] = one_sided / 2
            for i, tc in enumerate(cheb_T(d).coeffs):
                work[i] -= one_sided * tc
    half[0] = work[0]
    return ChebyshevExpansion.from_coeffs(half)


def cheb_transform_factored(roots: Iterable, scale=1) -> ChebyshevExpansion:
    """Chebyshev expansion of ``scale * prod (t - z)`` read off the Laurent product."""
    roots = list(roots)
    g = laurent_from_roots(roots, scale)
    half = [g.coeff(d) for d in range(len(roots) + 1)]
    # the Laurent product is symmetric in s <-> 1/s; keep the cheap sanity check
    for d in range(1, len(roots) + 1):
        if g.coeff(-d) != half[d]:
            raise AssertionError("Laurent product lost its s <-> 1/s symmetry")
    return ChebyshevExpansion.from_coeffs(half)


def cheb_truncate(e: ChebyshevExpansion, k: int) -> RationalPoly:
    return e.truncate(k)


def sigma_inner(e1: ChebyshevExpansion, e2: ChebyshevExpansion) -> Fraction:
    """E_{t~sigma}[p1(t) p2(t)] from orthogonality: a_0 b_0 + 2 sum_{d>0} a_d b_d."""
    acc = Fraction(0)
    for d in range(max(len(e1.half_coeffs), len(e2.half_coeffs))):
        a, b = e1.coeff(d), e2.coeff(d)
        if a and b:
            acc += a * b if d == 0 else 2 * a * b
    return acc


def parseval_circle_check(g: LaurentPoly, samples: int) -> float:
    """|sum |coeff|^2  -  average of |g(z)|^2 over the samples-th roots of unity|.

    The discrete average is exact (in infinite precision) once ``samples``
    exceeds the exponent span of |g|^2, so the return value is pure floating
    point rounding.
    """
    if samples <= 2 * g.span():
        raise ValueError(
            f"need more than {2 * g.span()} samples for an exact circle average"
        )
    lhs = sum(float(c) * float(c) for _, c in g.terms)
    rhs = 0.0
    for j in range(samples):
        z = cmath.exp(2j * cmath.pi * j / samples)
        rhs += abs(g.evaluate(z)) ** 2
    rhs /= samples
    return abs(lhs - rhs)
