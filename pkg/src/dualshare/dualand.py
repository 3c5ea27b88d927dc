"""The explicit dual witness for (weighted) AND and its secret-sharing sampler.

AND here lives on the cube: AND(x) = 1 iff x = 1^n, i.e. iff all bits are 0
under the package's encoding x_i = 1 - 2 b_i.  The witness has the shape

    phi(x)  proportional to  chi_[n](x) * (E_{S ~ H}[chi_S(x)])^2

where H is uniform over the down-set {S : w(S) <= (|w|_1 - d)/2}.  The
character average for all x at once is one Walsh-Hadamard transform of the
indicator of H, which keeps construction and verification at O(n 2^n).

Sign orientation: the construction carries a global (-1)^n; we negate the
witness when that factor would make the correlation with AND negative (an
equivalent witness), which works out to sign(phi(x)) = chi_[n](x) always.

Pure high degree is *strict*: every monomial of chi_[n] E^2 has weighted
degree at least d and can sit exactly at d, so pairings are guaranteed to
vanish only for w(S) < d.  That is what certifies that no polynomial of
weighted degree below d achieves the approximation error.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from math import comb

from .boolcube import DualWitness, WeightVector, mask_to_bits, walsh_hadamard

_CUBE_CAP = 22


@dataclass(frozen=True)
class DualAndParams:
    n: int
    w: WeightVector
    d: Fraction

    def __post_init__(self):
        if self.w.n != self.n:
            raise ValueError("weight vector length must equal n")
        if not 0 < self.d <= self.w.l1():
            raise ValueError("need 0 < d <= |w|_1")
        if self.n > _CUBE_CAP:
            raise ValueError(f"exact cube construction capped at n <= {_CUBE_CAP}")

    @staticmethod
    def uniform(n: int, d) -> "DualAndParams":
        return DualAndParams(n, WeightVector.uniform(n), Fraction(d))


@dataclass(frozen=True)
class DualAndWitness:
    params: DualAndParams
    H_size: int
    Z: Fraction
    witness: DualWitness
    epsilon: Fraction
    char_sums: tuple[int, ...]  # sum_{S in H} chi_S(x) for every x


@dataclass(frozen=True)
class WitnessReport:
    pure_high_degree: bool
    violations: tuple[int, ...]  # subset masks with w(S) < d but nonzero pairing
    l1_norm: Fraction
    correlation: Fraction


def subset_weight_table(w: WeightVector) -> list[Fraction]:
    """w(S) for every subset mask S, by the low-bit recursion."""
    n = w.n
    tab = [Fraction(0)] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        tab[m] = tab[m ^ low] + w.entries[low.bit_length() - 1]
    return tab


def build_witness(params: DualAndParams) -> DualAndWitness:
    """Construct the witness; errors out if the down-set H is empty."""
    n, w, d = params.n, params.w, params.d
    threshold = (w.l1() - d) / 2
    if threshold < 0:
        raise ValueError("d exceeds |w|_1: H is empty")
    weights = subset_weight_table(w)
    indicator = [1 if weights[s] <= threshold else 0 for s in range(1 << n)]
    h_size = sum(indicator)
    # threshold >= 0 puts the empty set in H, so h_size >= 1 here
    char_sums = walsh_hadamard(indicator)
    denom = (1 << n) * h_size
    values = []
    for x in range(1 << n):
        sign = -1 if x.bit_count() & 1 else 1
        m = char_sums[x]
        values.append(Fraction(sign * m * m, denom))
    witness = DualWitness(
        n=n, values=tuple(values), representation="cube", claimed_degree=d
    )
    return DualAndWitness(
        params=params,
        H_size=h_size,
        Z=Fraction(1 << n, h_size),
        witness=witness,
        epsilon=Fraction(h_size, 1 << n),
        char_sums=tuple(char_sums),
    )


def and_cube(n: int):
    """AND: {-1,1}^n -> {0,1}, accepting only x = 1^n (all bits zero)."""

    def f(bits):
        return 1 if not any(bits) else 0

    return f


def verify_witness(wit: DualWitness, f, d, w: WeightVector) -> WitnessReport:
    """Check the three witness conditions exactly.

    (a) <phi, chi_S> = 0 for every S with w(S) strictly below d (all pairings
        are read off one Walsh-Hadamard transform of the scaled values);
    (b) the L1 norm is exactly 1;
    (c) the exact correlation <phi, f>, for the caller to compare with the
        claimed epsilon.
    """
    n = wit.n
    if w.n != n:
        raise ValueError("weight vector length must equal n")
    vals = wit.cube_values()
    from math import lcm

    scale = lcm(*(v.denominator for v in vals)) if vals else 1
    scaled = [int(v * scale) for v in vals]
    transform = walsh_hadamard(scaled)
    weights = subset_weight_table(w)
    d = Fraction(d)
    violations = tuple(
        s for s in range(1 << n) if weights[s] < d and transform[s] != 0
    )
    l1 = Fraction(sum(abs(v) for v in scaled), scale)
    from .boolcube import pair_with_witness

    correlation = pair_with_witness(wit, f)
    return WitnessReport(
        pure_high_degree=not violations,
        violations=violations,
        l1_norm=l1,
        correlation=correlation,
    )


def _signed_sum_counts(w: WeightVector) -> dict[Fraction, int]:
    """Distribution of <w, X> over uniform X in {-1,1}^n as value -> count."""
    counts: dict[Fraction, int] = {Fraction(0): 1}
    for wi in w.entries:
        nxt: dict[Fraction, int] = {}
        for s, c in counts.items():
            for v in (s + wi, s - wi):
                nxt[v] = nxt.get(v, 0) + c
        counts = nxt
    return counts


def epsilon_of(params: DualAndParams) -> Fraction:
    """Pr[<w, X> >= d] over uniform signs, exactly."""
    counts = _signed_sum_counts(params.w)
    hits = sum(c for s, c in counts.items() if s >= params.d)
    return Fraction(hits, 1 << params.n)


def binomial_tail_epsilon(n: int, d: int) -> Fraction:
    """Uniform-weights formula: 2^-n * sum_{k <= (n-d)/2} C(n, k)."""
    top = (n - int(d)) // 2
    return Fraction(sum(comb(n, k) for k in range(top + 1)), 1 << n)


def weighted_anticoncentration_check(w: WeightVector) -> tuple[Fraction, bool]:
    """Pr[<w, X> >= |w|_2 / 2] by exact enumeration, and whether it is >= 3/32.

    The irrational threshold is compared by squaring: s >= |w|_2/2 iff s >= 0
    and 4 s^2 >= |w|_2^2.
    """
    q = w.l2_squared()
    counts = _signed_sum_counts(w)
    hits = sum(c for s, c in counts.items() if s >= 0 and 4 * s * s >= q)
    prob = Fraction(hits, 1 << w.n)
    return prob, prob >= Fraction(3, 32)


class ShareSampler:
    """Exact inverse-CDF sampler for the witness's share distribution.

    Shares are drawn with probability proportional to (E_{S~H}[chi_S(x)])^2
    conditioned on the parity prod x_i equalling the secret; the convention
    is secret +1 <-> prod x_i = +1 (even number of ONE bits).  Deterministic
    given the seed; the CDF table is integer-exact.
    """

    def __init__(self, wit: DualAndWitness, secret: int, seed: int):
        if secret not in (1, -1):
            raise ValueError("secret must be +1 or -1")
        n = wit.params.n
        want_odd = secret == -1
        self._n = n
        self._points: list[int] = []
        masses: list[int] = []
        for x in range(1 << n):
            if (x.bit_count() & 1 == 1) == want_odd:
                m = wit.char_sums[x]
                self._points.append(x)
                masses.append(m * m)
        self._cum = list(accumulate(masses))
        self._total = self._cum[-1]
        assert self._total > 0, "conditional support cannot be empty when |H| >= 1"
        self._rng = random.Random(seed)

    def exact_distribution(self) -> dict[int, Fraction]:
        """mask -> exact conditional probability."""
        out = {}
        prev = 0
        for x, c in zip(self._points, self._cum):
            if c != prev:
                out[x] = Fraction(c - prev, self._total)
            prev = c
        return out

    def sample_mask(self) -> int:
        r = self._rng.randrange(self._total)
        return self._points[bisect_right(self._cum, r)]

    def sample(self) -> tuple[int, ...]:
        return mask_to_bits(self._n, self.sample_mask())


def sample_shares(wit: DualAndWitness, secret: int, rng_seed: int) -> tuple[int, ...]:
    """One share vector (as 0/1 bits); see ShareSampler for batched draws."""
    return ShareSampler(wit, secret, rng_seed).sample()


def reconstruction_advantage(wit: DualAndWitness) -> Fraction:
    """E[AND(shares | secret=+1)] - E[AND(shares | secret=-1)], exactly.

    Computed from the two conditional tables; equals 2 <phi, AND>.
    """
    adv = Fraction(0)
    for secret in (1, -1):
        sampler = ShareSampler(wit, secret, seed=0)
        dist = sampler.exact_distribution()
        adv += secret * dist.get(0, Fraction(0))  # mask 0 is the accepting point
    return adv
