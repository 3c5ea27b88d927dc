"""Boolean-cube Fourier analysis and symmetric distributions over Hamming weights.

Bit encoding, fixed once for the whole package: a bit ``b in {0, 1}`` maps to
``x = 1 - 2b in {-1, 1}``, so the all-ones cube point ``x = 1^n`` is the
all-zeros bit string, and a Hamming weight ``h`` (number of ONE bits) sits at
the symmetrised coordinate ``t = 1 - 2h/n``.  Characters follow the same
convention: ``chi_S(x) = prod_{i in S} x_i = (-1)^{|S & ones(b)|}``.

Cube points are represented as integer bitmasks internally and as 0/1 tuples
at API boundaries.  Symmetric distributions store one probability per
Hamming weight (the total mass of the weight class, not per string).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence


def bits_to_mask(bits: Sequence[int]) -> int:
    m = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError("bits must be 0/1")
        m |= b << i
    return m


def mask_to_bits(n: int, mask: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def chi(s_mask: int, x_mask: int) -> int:
    """chi_S(x) for the cube point with ONE-bits ``x_mask``."""
    return -1 if (s_mask & x_mask).bit_count() & 1 else 1


def walsh_hadamard(values: Sequence) -> list:
    """Unnormalised character transform: out[x] = sum_S in[S] * chi_S(x).

    Runs the in-place butterfly in O(n 2^n) ring operations; exact on ints
    and Fractions.  The same routine inverts itself up to the factor 2^n.
    """
    v = list(values)
    size = len(v)
    if size == 0 or size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                a, b = v[j], v[j + h]
                v[j], v[j + h] = a + b, a - b
        h *= 2
    return v


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative per-variable weights."""

    entries: tuple[Fraction, ...]

    @staticmethod
    def of(values: Iterable) -> "WeightVector":
        entries = tuple(Fraction(v) for v in values)
        if any(e < 0 for e in entries):
            raise ValueError("weights must be nonnegative")
        return WeightVector(entries)

    @staticmethod
    def uniform(n: int) -> "WeightVector":
        return WeightVector(tuple([Fraction(1)] * n))

    @property
    def n(self) -> int:
        return len(self.entries)

    def l1(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def l2_squared(self) -> Fraction:
        return sum((e * e for e in self.entries), Fraction(0))

    def is_uniform(self) -> bool:
        return all(e == self.entries[0] for e in self.entries)


@dataclass(frozen=True)
class SymmetricDistribution:
    """Distribution over {0,1}^n invariant under coordinate permutations.

    ``weight_probs[h]`` is the total probability of Hamming weight h; each of
    the C(n, h) strings in the class carries ``weight_probs[h] / C(n, h)``.
    """

    n: int
    weight_probs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weight_probs) != self.n + 1:
            raise ValueError("need one probability per weight 0..n")
        if any(p < 0 for p in self.weight_probs):
            raise ValueError("negative probability")
        if sum(self.weight_probs) != 1:
            raise ValueError("probabilities must sum to exactly 1")

    @staticmethod
    def of(n: int, probs: Iterable) -> "SymmetricDistribution":
        return SymmetricDistribution(n, tuple(Fraction(p) for p in probs))

    @staticmethod
    def uniform(n: int) -> "SymmetricDistribution":
        return SymmetricDistribution.of(
            n, [Fraction(comb(n, h), 2**n) for h in range(n + 1)]
        )

    @staticmethod
    def point_mass(n: int, h: int) -> "SymmetricDistribution":
        return SymmetricDistribution.of(
            n, [Fraction(1) if w == h else Fraction(0) for w in range(n + 1)]
        )

    def per_string_prob(self, h: int) -> Fraction:
        return self.weight_probs[h] / comb(self.n, h)

    def reflected(self) -> "SymmetricDistribution":
        """Distribution of the bitwise complement."""
        return SymmetricDistribution(self.n, tuple(reversed(self.weight_probs)))

    def expectation(self, values_by_weight: Sequence) -> Fraction:
        return sum(
            (p * Fraction(values_by_weight[h]) for h, p in enumerate(self.weight_probs) if p),
            Fraction(0),
        )


def project_symmetric(d: SymmetricDistribution, k: int) -> SymmetricDistribution:
    """Marginal of any k coordinates; symmetric again, so one formula serves all.

    Per-string probability of a weight-w substring is
    sum_h C(n-k, h) * weight_probs[h+w] / C(n, h+w), aggregated with C(k, w).
    """
    n = d.n
    if not 0 <= k <= n:
        raise ValueError("projection size out of range")
    if k == 0:
        return SymmetricDistribution.of(0, [1])
    out = []
    for w in range(k + 1):
        per_string = sum(
            (
                comb(n - k, h) * d.weight_probs[h + w] / comb(n, h + w)
                for h in range(n - k + 1)
                if d.weight_probs[h + w]
            ),
            Fraction(0),
        )
        out.append(comb(k, w) * per_string)
    return SymmetricDistribution.of(k, out)


def stat_distance_symmetric(
    d1: SymmetricDistribution, d2: SymmetricDistribution
) -> Fraction:
    """(1/2) sum_h |p1[h] - p2[h]|; equals the best distinguishing advantage."""
    if d1.n != d2.n:
        raise ValueError("mismatched n")
    return sum(
        (abs(a - b) for a, b in zip(d1.weight_probs, d2.weight_probs)), Fraction(0)
    ) / 2


def kwise_indistinguishable(
    d1: SymmetricDistribution, d2: SymmetricDistribution, k: int
) -> bool:
    """True iff the size-k projections agree exactly.

    Projections commute, so equality at size k implies it for all smaller
    sizes.
    """
    if d1.n != d2.n:
        raise ValueError("mismatched n")
    if not 0 <= k <= d1.n:
        raise ValueError("k out of range")
    if k == 0:
        return True
    return project_symmetric(d1, k) == project_symmetric(d2, k)


@dataclass
class ParityPoly:
    """Multilinear polynomial over {-1,1}^n as subset-bitmask -> coefficient."""

    n: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {
            s: Fraction(c) for s, c in self.coeffs.items() if c != 0
        }

    def coeff(self, s_mask: int) -> Fraction:
        return self.coeffs.get(s_mask, Fraction(0))

    def weight(self) -> Fraction:
        """L1 norm of the coefficients in the parity basis."""
        return sum((abs(c) for c in self.coeffs.values()), Fraction(0))

    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(s.bit_count() for s in self.coeffs)

    def evaluate_mask(self, x_mask: int) -> Fraction:
        return sum(
            (c if not (s & x_mask).bit_count() & 1 else -c
             for s, c in self.coeffs.items()),
            Fraction(0),
        )

    def evaluate_bits(self, bits: Sequence[int]) -> Fraction:
        return self.evaluate_mask(bits_to_mask(bits))

    def values_on_cube(self) -> list[Fraction]:
        """Value table over all 2^n points via one Walsh-Hadamard transform."""
        vec = [Fraction(0)] * (1 << self.n)
        for s, c in self.coeffs.items():
            vec[s] = c
        return walsh_hadamard(vec)

    def negate_vars(self, var_mask: int) -> "ParityPoly":
        """Substitute x_i -> -x_i for every i in var_mask; weight is preserved."""
        return ParityPoly(
            self.n,
            {
                s: (-c if (s & var_mask).bit_count() & 1 else c)
                for s, c in self.coeffs.items()
            },
        )

    def __add__(self, other: "ParityPoly") -> "ParityPoly":
        if self.n != other.n:
            raise ValueError("mismatched n")
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, Fraction(0)) + c
        return ParityPoly(self.n, out)

    def scaled(self, c) -> "ParityPoly":
        c = Fraction(c)
        return ParityPoly(self.n, {s: v * c for s, v in self.coeffs.items()})


def parity_weight(p: ParityPoly) -> Fraction:
    return p.weight()


def basis_convert(monomial_coeffs: dict[int, Fraction], n: int) -> ParityPoly:
    """Multilinear polynomial in 0/1 variables -> parity basis.

    Input maps a bitmask S to the coefficient of prod_{i in S} b_i; the
    substitution b_i = (1 - x_i)/2 is expanded exactly, so evaluations agree
    at all 2^n points.
    """
    out: dict[int, Fraction] = {}
    for s, a in monomial_coeffs.items():
        a = Fraction(a)
        if not a:
            continue
        scale = Fraction(1, 1 << s.bit_count())
        sub = s
        while True:
            sign = -1 if sub.bit_count() & 1 else 1
            out[sub] = out.get(sub, Fraction(0)) + sign * a * scale
            if sub == 0:
                break
            sub = (sub - 1) & s
    return ParityPoly(n, out)


def kravchuk(n: int, r: int, h: int) -> int:
    """sum over |S| = r of chi_S at any input of Hamming weight h."""
    return sum(
        (-1) ** j * comb(h, j) * comb(n - h, r - j)
        for j in range(max(0, r - (n - h)), min(r, h) + 1)
    )


@dataclass(frozen=True)
class DualWitness:
    """Signed function with unit L1 mass certifying an approximate-degree bound.

    ``representation == "cube"``: one value per point of {-1,1}^n (indexed by
    the bitmask of the underlying bits).  ``representation == "symmetric"``:
    one *per-string* value per Hamming weight; L1 mass then counts each weight
    class with multiplicity C(n, h).  ``claimed_degree`` is the threshold d of
    the construction: pairings vanish for weighted degree strictly below d.
    """

    n: int
    values: tuple[Fraction, ...]
    representation: str = "cube"
    claimed_degree: Fraction | int | None = None

    def __post_init__(self):
        if self.representation not in ("cube", "symmetric"):
            raise ValueError("representation must be 'cube' or 'symmetric'")
        expected = (1 << self.n) if self.representation == "cube" else self.n + 1
        if len(self.values) != expected:
            raise ValueError("value table has the wrong length")

    def l1_norm(self) -> Fraction:
        if self.representation == "cube":
            return sum((abs(v) for v in self.values), Fraction(0))
        return sum(
            (comb(self.n, h) * abs(v) for h, v in enumerate(self.values)),
            Fraction(0),
        )

    def cube_values(self) -> tuple[Fraction, ...]:
        if self.representation == "cube":
            return self.values
        return tuple(
            self.values[m.bit_count()] for m in range(1 << self.n)
        )


def _function_values(n: int, f) -> Callable[[int], Fraction]:
    """Normalise the accepted function encodings to mask -> value."""
    if isinstance(f, ParityPoly):
        table = f.values_on_cube()
        return lambda m: table[m]
    if callable(f):
        return lambda m: Fraction(f(mask_to_bits(n, m)))
    values = [Fraction(v) for v in f]
    if len(values) != n + 1:
        raise ValueError("symmetric value vector must have length n+1")
    return lambda m: values[m.bit_count()]


def pair_with_witness(psi: DualWitness, f) -> Fraction:
    """<psi, f> = sum_x psi(x) f(x), expanding symmetric weights with multiplicity.

    ``f`` may be a ParityPoly, a callable on 0/1 tuples, or a length-(n+1)
    weight-value vector for symmetric functions.
    """
    n = psi.n
    if psi.representation == "symmetric":
        if isinstance(f, ParityPoly):
            # sum_{|x|=h} chi_S(x) depends only on |S|: kravchuk with the
            # subset size in the weight slot
            acc = Fraction(0)
            by_size: dict[int, Fraction] = {}
            for s, c in f.coeffs.items():
                r = s.bit_count()
                by_size[r] = by_size.get(r, Fraction(0)) + c
            for h, v in enumerate(psi.values):
                if v:
                    acc += v * sum(
                        (c * kravchuk(n, h, r) for r, c in by_size.items()),
                        Fraction(0),
                    )
            return acc
        if not callable(f):
            values = [Fraction(x) for x in f]
            return sum(
                (comb(n, h) * v * values[h] for h, v in enumerate(psi.values) if v),
                Fraction(0),
            )
        # fall through: expand to the cube for black-box functions
    fx = _function_values(n, f)
    vals = psi.cube_values()
    return sum((v * fx(m) for m, v in enumerate(vals) if v), Fraction(0))
