"""Approximate-degree oracle, dual distribution pairs, and the ramp formulas.

Everything runs through the exact LP: the minimax error of a symmetric
function on its weight grid equals its multivariate symmetric approximation
error, the LP's dual measure is a dual witness, and splitting that witness
into its positive and negative parts (times two) yields a pair of perfectly
k-wise indistinguishable symmetric distributions whose advantage under the
target equals twice the minimax error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .boolcube import DualWitness, SymmetricDistribution, kwise_indistinguishable
from .ratpoly import RationalPoly, cheb_transform_factored
from .simplex import solve_minimax
from .symcheb import exact_weight_test, hypergeom_prob, indistinguishability_bound, weight_grid


@dataclass(frozen=True)
class MinimaxInstance:
    points: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    degree: int

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError("points and values must align")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")

    @staticmethod
    def of(points, values, degree: int) -> "MinimaxInstance":
        return MinimaxInstance(
            tuple(Fraction(p) for p in points),
            tuple(Fraction(v) for v in values),
            degree,
        )

    @staticmethod
    def on_weight_grid(values, degree: int) -> "MinimaxInstance":
        values = tuple(Fraction(v) for v in values)
        return MinimaxInstance(weight_grid(len(values) - 1), values, degree)


@dataclass(frozen=True)
class LPDualCertificate:
    """Optimal dual measure of a minimax instance.

    ``psi[i]`` is the signed mass at ``points[i]``; the moments up to
    ``degree`` vanish, the total variation is 1, and the pairing with the
    instance values equals ``epsilon`` (all exact, audited by the solver).
    """

    points: tuple[Fraction, ...]
    psi: tuple[Fraction, ...]
    epsilon: Fraction
    degree: int

    def grid_n(self) -> int:
        """The n for which the points are the weight grid; errors otherwise."""
        n = len(self.points) - 1
        if self.points != weight_grid(n):
            raise ValueError("certificate does not live on a Hamming-weight grid")
        return n

    def symmetric_witness(self) -> DualWitness:
        """Per-string symmetric DualWitness (weight-class mass / C(n, h))."""
        n = self.grid_n()
        return DualWitness(
            n=n,
            values=tuple(p / comb(n, h) for h, p in enumerate(self.psi)),
            representation="symmetric",
            claimed_degree=self.degree + 1,
        )


def minimax_lp(
    inst: MinimaxInstance,
) -> tuple[RationalPoly, Fraction, LPDualCertificate]:
    sol = solve_minimax(inst.points, inst.values, inst.degree)
    cert = LPDualCertificate(
        points=inst.points, psi=sol.psi, epsilon=sol.epsilon, degree=inst.degree
    )
    return sol.poly, sol.epsilon, cert


def approx_degree(values_by_weight: Sequence, epsilon) -> int:
    """Least k whose minimax error on the weight grid is <= epsilon.

    Symmetrisation is lossless for symmetric functions: a univariate
    approximant on the grid lifts to a symmetric multilinear one of equal
    degree and error, and averaging projects any approximant back down.
    """
    epsilon = Fraction(epsilon)
    values = [Fraction(v) for v in values_by_weight]
    n = len(values) - 1
    if n > 1000:
        raise ValueError("desk-scale cap: n <= 1000")
    for k in range(n + 1):
        _, eps, _ = minimax_lp(MinimaxInstance.on_weight_grid(values, k))
        if eps <= epsilon:
            return k
    return n  # degree n always fits exactly through all n+1 points


def dual_distributions(
    cert: LPDualCertificate,
) -> tuple[SymmetricDistribution, SymmetricDistribution]:
    """Split psi = (mu - nu)/2 into the perfectly indistinguishable pair.

    mu doubles the positive part and nu the negative part; zero pairing with
    constants makes both sum to exactly 1, and the vanishing moments up to
    ``degree`` make the pair perfectly degree-wise indistinguishable.
    """
    n = cert.grid_n()
    if sum(cert.psi) != 0:
        raise ValueError("witness pairs nonzero with the constant character")
    if sum(abs(p) for p in cert.psi) != 1:
        raise ValueError("witness must have unit total variation")
    mu = tuple(2 * p if p > 0 else Fraction(0) for p in cert.psi)
    nu = tuple(-2 * p if p < 0 else Fraction(0) for p in cert.psi)
    return (
        SymmetricDistribution(n, mu),
        SymmetricDistribution(n, nu),
    )


def split_cube_witness(
    wit: DualWitness,
) -> tuple[SymmetricDistribution, SymmetricDistribution]:
    """Positive/negative split of a symmetric witness into distributions.

    A cube-represented witness must actually be symmetric (constant on weight
    classes); that is verified before aggregating.
    """
    n = wit.n
    if wit.representation == "symmetric":
        mass = [wit.values[h] * comb(n, h) for h in range(n + 1)]
    else:
        mass = [Fraction(0)] * (n + 1)
        for m, v in enumerate(wit.values):
            mass[m.bit_count()] += v
        for m, v in enumerate(wit.values):
            h = m.bit_count()
            if v * comb(n, h) != mass[h]:
                raise ValueError("witness is not symmetric")
    if sum(mass) != 0:
        raise ValueError("witness pairs nonzero with the constant character")
    mu = tuple(2 * q if q > 0 else Fraction(0) for q in mass)
    nu = tuple(-2 * q if q < 0 else Fraction(0) for q in mass)
    return SymmetricDistribution(n, mu), SymmetricDistribution(n, nu)


@dataclass(frozen=True)
class RampParams:
    """Secrecy threshold k, reconstruction size K, optional finite n.

    The headline statement ranges over 2 <= k < K; the advantage formula is
    well defined from k = 1, which the radicand examples exercise.
    """

    k: int
    K: int
    n: int = 0

    def __post_init__(self):
        if not 1 <= self.k < self.K:
            raise ValueError("need 1 <= k < K")
        if self.n and self.K > self.n:
            raise ValueError("need K <= n")


def ramp_radicand(k: int, K: int, constant_exponent_shift: int = 3) -> Fraction:
    """2^{-4K + shift} * sum_{d > k} C(2K, K+d)^2.

    The statement-level constant uses shift 3; the proof-level derivation
    (which matches the L2 identity exactly) uses shift 1.  Both are exposed.
    """
    total = sum(comb(2 * K, K + d) ** 2 for d in range(k + 1, K + 1))
    return Fraction(total * 2**constant_exponent_shift, 2 ** (4 * K))


def ramp_advantage(params: RampParams) -> tuple[Fraction, float]:
    """Exact radicand (statement constant 2^{-4K+3}) and its floating root."""
    radicand = ramp_radicand(params.k, params.K, 3)
    return radicand, math.sqrt(radicand)


def ramp_advantage_proof_constant(params: RampParams) -> tuple[Fraction, float]:
    """Same with the proof-level constant 2^{-4K+1}; its square equals
    the L2 tail bound exactly."""
    radicand = ramp_radicand(params.k, params.K, 1)
    return radicand, math.sqrt(radicand)


def l2_tail_bound(K: int, k: int) -> Fraction:
    """sum_{d > k} 2 (2^{-2K} C(2K, K+d))^2: the exact sigma-measure floor on
    (p_0^infty - q)^2 for any degree-k q."""
    if k > K:
        raise ValueError("need k <= K")
    return sum(
        (2 * Fraction(comb(2 * K, K + d), 2 ** (2 * K)) ** 2 for d in range(k + 1, K + 1)),
        Fraction(0),
    )


def limit_ramp_poly(K: int) -> RationalPoly:
    """p_0^infty(t) = 2^-K (t+1)^K, the n -> infinity limit of p_0."""
    return RationalPoly.from_roots([Fraction(-1)] * K, Fraction(1, 2**K))


def limit_ramp_cheb_coeff(K: int, d: int) -> Fraction:
    """Chebyshev coefficient of p_0^infty: 2^{-2K} C(2K, K+d)."""
    return Fraction(comb(2 * K, K + abs(d)), 2 ** (2 * K))


def finite_n_ramp(
    params: RampParams,
) -> tuple[SymmetricDistribution, SymmetricDistribution, Fraction]:
    """LP-built k-wise indistinguishable pair reconstructible by the first-K AND.

    Builds p_0 for (n, K), solves the degree-k minimax problem on the weight
    grid, splits the dual certificate, and flips both distributions so the
    reconstruction test is the AND (rather than the NOR) of the first K bits.
    The returned advantage is exact and equals twice the minimax error; the
    pair is asserted perfectly k-wise indistinguishable.
    """
    n, K, k = params.n, params.K, params.k
    if not n:
        raise ValueError("finite ramp needs n")
    if n > 1000 or K > 8:
        raise ValueError("desk-scale caps: n <= 1000, K <= 8")
    test = exact_weight_test(n, K, 0)
    values = [test.grid_value(h) for h in range(n + 1)]
    _, eps, cert = minimax_lp(MinimaxInstance.on_weight_grid(values, k))
    mu, nu = dual_distributions(cert)
    mu, nu = mu.reflected(), nu.reflected()
    and_values = [hypergeom_prob(n, K, K, h) for h in range(n + 1)]
    advantage = mu.expectation(and_values) - nu.expectation(and_values)
    assert advantage == 2 * eps, "complementary slackness should force this"
    assert kwise_indistinguishable(mu, nu, k)
    return mu, nu, advantage


def consolidate_and(d: SymmetricDistribution, t: int) -> SymmetricDistribution:
    """Distribution of the per-block AND bits under a symmetric share vector.

    The tn positions split into n blocks of size t; conditioned on total
    weight h the ones are uniformly placed, so the number of full blocks
    follows from an exact placement count built by dynamic programming over
    (blocks processed, ones consumed, full blocks so far).
    """
    if t <= 0:
        raise ValueError("block size must be positive")
    if d.n % t:
        raise ValueError("number of positions must be divisible by the block size")
    big_n = d.n
    n_out = big_n // t
    ways: dict[tuple[int, int], int] = {(0, 0): 1}
    for _ in range(n_out):
        nxt: dict[tuple[int, int], int] = {}
        for (ones, full), cnt in ways.items():
            for c in range(t + 1):
                key = (ones + c, full + (c == t))
                nxt[key] = nxt.get(key, 0) + cnt * comb(t, c)
        ways = nxt
    out = [Fraction(0)] * (n_out + 1)
    for h, p in enumerate(d.weight_probs):
        if not p:
            continue
        denom = comb(big_n, h)
        for full in range(n_out + 1):
            w = ways.get((h, full), 0)
            if w:
                out[full] += p * Fraction(w, denom)
    return SymmetricDistribution(n_out, tuple(out))


def consolidation_bound(k: int, K: int, t: int, n: int) -> float:
    """2 * indistinguishability_bound(k, tK) * n^K: distance to a perfectly
    indistinguishable pair after consolidating blocks of size t."""
    return 2.0 * indistinguishability_bound(k, t * K) * float(n) ** K


def limit_ramp_expansion(K: int):
    """Chebyshev expansion of p_0^infty via the factored transform."""
    return cheb_transform_factored([Fraction(-1)] * K, Fraction(1, 2**K))
