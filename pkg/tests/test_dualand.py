import math
import random
from fractions import Fraction

import pytest

from dualshare.boolcube import (
    DualWitness,
    WeightVector,
    kwise_indistinguishable,
)
from dualshare.dualand import (
    DualAndParams,
    ShareSampler,
    and_cube,
    binomial_tail_epsilon,
    build_witness,
    epsilon_of,
    reconstruction_advantage,
    sample_shares,
    verify_witness,
    weighted_anticoncentration_check,
)


def brute_epsilon(w: WeightVector, d: Fraction) -> Fraction:
    """Pr[<w, X> >= d] by full enumeration of sign patterns."""
    n = w.n
    hits = 0
    for m in range(1 << n):
        s = sum((1 - 2 * ((m >> i) & 1)) * w.entries[i] for i in range(n))
        if s >= d:
            hits += 1
    return Fraction(hits, 1 << n)


class TestBuildWitness:
    def test_n2_worked_example(self):
        wit = build_witness(DualAndParams.uniform(2, 1))
        assert wit.H_size == 1
        assert wit.Z == 4
        assert wit.epsilon == Fraction(1, 4)
        # phi(x) = x1 x2 / 4
        for m in range(4):
            x1, x2 = 1 - 2 * (m & 1), 1 - 2 * ((m >> 1) & 1)
            assert wit.witness.values[m] == Fraction(x1 * x2, 4)

    def test_n1_orientation(self):
        # the raw (-1)^n factor would give correlation -1/2; the witness is
        # negated so that <phi, AND> = 1/2 = Pr[X_1 >= 1]
        wit = build_witness(DualAndParams.uniform(1, 1))
        assert wit.witness.values == (Fraction(1, 2), Fraction(-1, 2))
        assert wit.epsilon == Fraction(1, 2)

    def test_n4_epsilon(self):
        wit = build_witness(DualAndParams.uniform(4, 2))
        assert wit.epsilon == Fraction(5, 16)

    def test_empty_H_rejected(self):
        with pytest.raises(ValueError):
            DualAndParams(2, WeightVector.uniform(2), Fraction(3))

    def test_Z_times_H_is_2n(self, rng):
        for _ in range(100):
            n = rng.randint(1, 8)
            w = WeightVector.of(
                [Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(n)]
            )
            d = w.l1() * Fraction(rng.randint(1, 7), 8)
            wit = build_witness(DualAndParams(n, w, d))
            assert wit.Z * wit.H_size == 1 << n


class TestVerifyWitness:
    def test_n2_report(self):
        p = DualAndParams.uniform(2, 1)
        wit = build_witness(p)
        rep = verify_witness(wit.witness, and_cube(2), p.d, p.w)
        assert rep.pure_high_degree
        assert rep.l1_norm == 1
        assert rep.correlation == Fraction(1, 4)
        # the subsets strictly below weight 1 are {} alone; the transform also
        # vanishes at the singletons since phi has only the full monomial
        assert 0 not in rep.violations

    def test_zero_function_fails_normalisation(self):
        zero = DualWitness(2, (Fraction(0),) * 4, "cube")
        rep = verify_witness(zero, and_cube(2), Fraction(1), WeightVector.uniform(2))
        assert rep.l1_norm == 0

    def test_n4_correlation_matches_epsilon(self):
        p = DualAndParams.uniform(4, 2)
        wit = build_witness(p)
        rep = verify_witness(wit.witness, and_cube(4), p.d, p.w)
        assert rep.correlation == Fraction(5, 16) == epsilon_of(p)

    def test_degree_boundary_is_strict(self):
        # for n=4, d=2 the witness has monomials of degree exactly 2, so the
        # pairing vanishes strictly below d but not at d
        p = DualAndParams.uniform(4, 2)
        wit = build_witness(p)
        from dualshare.boolcube import ParityPoly, pair_with_witness

        assert pair_with_witness(wit.witness, ParityPoly(4, {0b0011: Fraction(1)})) != 0
        assert pair_with_witness(wit.witness, ParityPoly(4, {0b0001: Fraction(1)})) == 0

    def test_uniform_sweep_exact(self):
        for n in range(2, 9):
            for d in range(1, n + 1):
                p = DualAndParams.uniform(n, d)
                wit = build_witness(p)
                rep = verify_witness(wit.witness, and_cube(n), p.d, p.w)
                assert rep.pure_high_degree
                assert rep.l1_norm == 1
                assert rep.correlation == epsilon_of(p) == binomial_tail_epsilon(n, d)


class TestEpsilonOf:
    def test_n4_uniform(self):
        assert epsilon_of(DualAndParams.uniform(4, 2)) == Fraction(5, 16)

    def test_full_threshold_single_point(self):
        for n in (1, 3, 5):
            assert epsilon_of(DualAndParams.uniform(n, n)) == Fraction(1, 1 << n)

    def test_weighted_example(self):
        p = DualAndParams(3, WeightVector.of([2, 1, 1]), Fraction(2))
        assert epsilon_of(p) == Fraction(3, 8)

    def test_against_brute_force(self, rng):
        for _ in range(20):
            n = rng.randint(1, 7)
            w = WeightVector.of(
                [Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(n)]
            )
            d = max(w.l1(), Fraction(1)) * Fraction(rng.randint(1, 8), 8)
            if not 0 < d <= max(w.l1(), Fraction(1)):
                continue
            if d > w.l1():
                continue
            p = DualAndParams(n, w, d)
            assert epsilon_of(p) == brute_epsilon(w, d)

    def test_monotone_in_d(self):
        w = WeightVector.of([2, 1, 1, Fraction(1, 2)])
        eps = [
            epsilon_of(DualAndParams(4, w, Fraction(num, 2)))
            for num in range(1, 10)
        ]
        assert all(a >= b for a, b in zip(eps, eps[1:]))


class TestWeightedAnticoncentration:
    def test_uniform_n4(self):
        prob, ok = weighted_anticoncentration_check(WeightVector.uniform(4))
        assert prob == Fraction(5, 16) and ok

    def test_single_coordinate(self):
        prob, ok = weighted_anticoncentration_check(WeightVector.of([1, 0, 0, 0]))
        assert prob == Fraction(1, 2) and ok

    def test_weighted_3111(self):
        prob, ok = weighted_anticoncentration_check(WeightVector.of([3, 1, 1, 1]))
        assert prob == Fraction(7, 16) and ok

    def test_random_weights_always_pass(self, rng):
        for _ in range(30):
            n = rng.randint(1, 8)
            w = WeightVector.of(
                [Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(n)]
            )
            prob, ok = weighted_anticoncentration_check(w)
            assert ok and prob >= Fraction(3, 32)


class TestSplitWitnessIndistinguishability:
    def test_split_is_dwise_indistinguishable(self):
        from dualshare.approxlab import split_cube_witness

        for n in range(2, 8):
            for d in range(1, n + 1):
                wit = build_witness(DualAndParams.uniform(n, d))
                mu, nu = split_cube_witness(wit.witness)
                assert kwise_indistinguishable(mu, nu, d - 1)


class TestSampler:
    def test_n2_support(self):
        wit = build_witness(DualAndParams.uniform(2, 1))
        plus = ShareSampler(wit, 1, seed=1)
        assert plus.exact_distribution() == {
            0b00: Fraction(1, 2),
            0b11: Fraction(1, 2),
        }
        minus = ShareSampler(wit, -1, seed=1)
        assert minus.exact_distribution() == {
            0b01: Fraction(1, 2),
            0b10: Fraction(1, 2),
        }

    def test_single_draw_api(self):
        wit = build_witness(DualAndParams.uniform(3, 1))
        bits = sample_shares(wit, 1, rng_seed=7)
        assert len(bits) == 3 and sum(bits) % 2 == 0

    def test_determinism(self):
        wit = build_witness(DualAndParams.uniform(4, 2))
        a = ShareSampler(wit, -1, seed=42)
        b = ShareSampler(wit, -1, seed=42)
        assert [a.sample() for _ in range(50)] == [b.sample() for _ in range(50)]

    def test_parity_of_samples_encodes_secret(self):
        wit = build_witness(DualAndParams.uniform(5, 2))
        for secret in (1, -1):
            sampler = ShareSampler(wit, secret, seed=3)
            for _ in range(200):
                bits = sampler.sample()
                assert (-1) ** sum(bits) == secret

    def test_empirical_frequencies_multinomial(self):
        # 10^5 draws against the exact table, 4 sigma per cell
        wit = build_witness(DualAndParams.uniform(6, 2))
        draws = 100_000
        sampler = ShareSampler(wit, 1, seed=2024)
        counts: dict[int, int] = {}
        for _ in range(draws):
            m = sampler.sample_mask()
            counts[m] = counts.get(m, 0) + 1
        table = sampler.exact_distribution()
        assert sum(counts.values()) == draws
        for m, p in table.items():
            expect = draws * float(p)
            sigma = math.sqrt(draws * float(p) * (1 - float(p)))
            assert abs(counts.get(m, 0) - expect) <= 4 * sigma

    def test_reconstruction_advantage_exact(self):
        wit = build_witness(DualAndParams.uniform(2, 1))
        assert reconstruction_advantage(wit) == Fraction(1, 2) == 2 * wit.epsilon

    def test_reconstruction_advantage_is_twice_epsilon(self, rng):
        for _ in range(10):
            n = rng.randint(2, 7)
            d = rng.randint(1, n)
            wit = build_witness(DualAndParams.uniform(n, d))
            assert reconstruction_advantage(wit) == 2 * wit.epsilon

    def test_empirical_reconstruction_advantage(self):
        wit = build_witness(DualAndParams.uniform(5, 3))
        draws = 100_000
        means = {}
        for secret in (1, -1):
            sampler = ShareSampler(wit, secret, seed=99)
            hits = sum(1 for _ in range(draws) if sampler.sample_mask() == 0)
            means[secret] = hits / draws
        exact = float(reconstruction_advantage(wit))
        p_plus = float(
            ShareSampler(wit, 1, seed=0).exact_distribution().get(0, Fraction(0))
        )
        sigma = math.sqrt(2 * p_plus * (1 - p_plus) / draws)
        assert abs((means[1] - means[-1]) - exact) <= 3 * sigma
