import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualshare.ratpoly import (
    ChebyshevExpansion,
    LaurentPoly,
    RationalPoly,
    cheb_T,
    cheb_transform,
    cheb_transform_factored,
    cheb_truncate,
    eval_poly,
    laurent_from_roots,
    parseval_circle_check,
    poly_from_roots,
    sigma_inner,
)

from conftest import random_fraction


class TestEval:
    def test_identity(self):
        assert eval_poly(RationalPoly.of(0, 1), Fraction(1, 2)) == Fraction(1, 2)

    def test_zero_poly(self):
        assert eval_poly(RationalPoly(), Fraction(7, 3)) == 0

    def test_against_naive_power_sum(self):
        # derived: hand expansion of t^2 - 1 at t = 3, plus a random sweep
        p = RationalPoly.of(-1, 0, 1)
        assert p(3) == 8
        rng = random.Random(7)
        for _ in range(25):
            coeffs = [random_fraction(rng) for _ in range(rng.randint(0, 9))]
            q = RationalPoly.from_coeffs(coeffs)
            t = random_fraction(rng)
            naive = sum(c * t**i for i, c in enumerate(coeffs))
            assert q(t) == naive


class TestFromRoots:
    def test_difference_of_squares(self):
        assert poly_from_roots([1, -1]) == RationalPoly.of(-1, 0, 1)

    def test_limit_ramp_base_case(self):
        # (t+1)/2 is the K=1 limit polynomial 2^-K (t+1)^K
        p = poly_from_roots([Fraction(-1)], Fraction(1, 2))
        assert p == RationalPoly.of(Fraction(1, 2), Fraction(1, 2))

    def test_scaled_product(self):
        p = poly_from_roots([0, Fraction(1, 2)], 3)
        assert p == RationalPoly.of(0, Fraction(-3, 2), 3)
        for t in (Fraction(2), Fraction(-1, 3), Fraction(5, 7)):
            assert p(t) == 3 * t * (t - Fraction(1, 2))


class TestChebPolynomials:
    def test_base_cases(self):
        assert cheb_T(0) == RationalPoly.of(1)
        assert cheb_T(1) == RationalPoly.of(0, 1)
        assert cheb_T(2) == RationalPoly.of(-1, 0, 2)

    def test_three_term_product_identity(self):
        # t * T_d = (T_{d-1} + T_{d+1}) / 2, exactly, for all small d
        t = RationalPoly.of(0, 1)
        for d in range(1, 13):
            lhs = t * cheb_T(d)
            rhs = (cheb_T(d - 1) + cheb_T(d + 1)) * Fraction(1, 2)
            assert lhs == rhs

    def test_bounded_on_interval(self):
        for d in range(9):
            td = cheb_T(d)
            for i in range(-50, 51):
                assert abs(td(Fraction(i, 50))) <= 1


class TestChebTransform:
    def test_t_squared(self):
        # symmetric two-sided convention: t^2 = (1/2) T_0 + (1/4)(T_2 + T_{-2})
        e = cheb_transform(RationalPoly.of(0, 0, 1))
        assert e.half_coeffs == (Fraction(1, 2), Fraction(0), Fraction(1, 4))

    def test_t_minus_one_matches_laurent_factor(self):
        # one factor of the Laurent product: (s + 1/s - 2)/2 has coefficients
        # -1 at s^0 and 1/2 at s^{+-1}
        e = cheb_transform(RationalPoly.of(-1, 1))
        assert e.coeff(0) == -1
        assert e.coeff(1) == Fraction(1, 2)
        assert cheb_transform_factored([Fraction(1)]).half_coeffs == e.half_coeffs

    def test_constant(self):
        e = cheb_transform(RationalPoly.of(1))
        assert e.half_coeffs == (Fraction(1),)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.fractions(min_value=-4, max_value=4, max_denominator=8),
            min_size=0,
            max_size=13,
        )
    )
    def test_round_trip(self, coeffs):
        p = RationalPoly.from_coeffs(coeffs)
        assert cheb_transform(p).to_poly() == p

    def test_factored_route_and_inversion_route_agree(self):
        rng = random.Random(11)
        for _ in range(40):
            deg = rng.randint(0, 12)
            roots = [
                Fraction(rng.randint(-10, 10), rng.randint(10, 12))
                for _ in range(deg)
            ]
            scale = random_fraction(rng)
            if scale == 0:
                scale = Fraction(1)
            direct = cheb_transform(poly_from_roots(roots, scale))
            laurent = cheb_transform_factored(roots, scale)
            assert direct.half_coeffs == laurent.half_coeffs


class TestTruncate:
    def test_no_drop_reproduces(self):
        p = RationalPoly.of(1, Fraction(-2, 3), 0, 5)
        e = cheb_transform(p)
        assert cheb_truncate(e, e.degree + 1) == p

    def test_drop_t_squared(self):
        e = cheb_transform(RationalPoly.of(0, 0, 1))
        assert cheb_truncate(e, 1) == RationalPoly.of(Fraction(1, 2))

    def test_drop_linear(self):
        e = cheb_transform(RationalPoly.of(-1, 1))
        assert cheb_truncate(e, 1) == RationalPoly.of(-1)


class TestSigmaInner:
    def test_chebyshev_second_moment(self):
        e3 = cheb_transform(cheb_T(3))
        assert sigma_inner(e3, e3) == Fraction(1, 2)

    def test_constant_moment(self):
        e = cheb_transform(RationalPoly.of(1))
        assert sigma_inner(e, e) == 1

    def test_orthogonality(self):
        for i in range(13):
            for j in range(i + 1, 13):
                ei = cheb_transform(cheb_T(i))
                ej = cheb_transform(cheb_T(j))
                assert sigma_inner(ei, ej) == 0

    def test_against_quadrature(self):
        # independent oracle: (1/pi) int p1 p2 / sqrt(1-t^2) via theta substitution
        rng = random.Random(5)
        for _ in range(10):
            p1 = RationalPoly.from_coeffs(
                [random_fraction(rng, 4, 4) for _ in range(rng.randint(1, 6))]
            )
            p2 = RationalPoly.from_coeffs(
                [random_fraction(rng, 4, 4) for _ in range(rng.randint(1, 6))]
            )
            exact = sigma_inner(cheb_transform(p1), cheb_transform(p2))
            steps = 20000
            acc = 0.0
            for i in range(steps):
                theta = math.pi * (i + 0.5) / steps
                t = math.cos(theta)
                acc += p1.eval_float(t) * p2.eval_float(t)
            assert abs(acc / steps - float(exact)) < 1e-9


class TestParseval:
    def test_two_term(self):
        g = LaurentPoly.from_dict({1: Fraction(1), -1: Fraction(1)})
        assert parseval_circle_check(g, 8) < 1e-9

    def test_constant(self):
        g = LaurentPoly.from_dict({0: Fraction(1)})
        assert parseval_circle_check(g, 4) < 1e-12

    def test_transform_of_linear(self):
        # coefficient squares: 1 + 1/4 + 1/4 = 3/2
        g = laurent_from_roots([Fraction(1)])
        assert sum(float(c) ** 2 for _, c in g.terms) == pytest.approx(1.5)
        assert parseval_circle_check(g, 16) < 1e-9

    def test_rejects_small_sample_counts(self):
        g = LaurentPoly.from_dict({2: Fraction(1), -2: Fraction(1)})
        with pytest.raises(ValueError):
            parseval_circle_check(g, 8)

    def test_random_laurent_polynomials(self):
        rng = random.Random(23)
        for _ in range(100):
            span = rng.randint(0, 12)
            terms = {
                e: Fraction(rng.randint(-10, 10), 10) for e in range(-span, span + 1)
            }
            g = LaurentPoly.from_dict(terms)
            assert parseval_circle_check(g, 2 * g.span() + 8) < 1e-8


class TestLaurent:
    def test_product_symmetry(self):
        rng = random.Random(3)
        for _ in range(20):
            roots = [random_fraction(rng, 10, 11) for _ in range(rng.randint(0, 8))]
            g = laurent_from_roots(roots)
            for e, c in g.terms:
                assert g.coeff(-e) == c

    def test_expansion_accessor_is_symmetric(self):
        e = ChebyshevExpansion.from_coeffs([1, 2, 3])
        assert e.coeff(-2) == e.coeff(2) == 3
        assert e.coeff(5) == 0
