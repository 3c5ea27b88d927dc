"""Low-weight approximants for point indicators and symmetric functions.

The constructive side composes an exact inner AND on blocks with an
LP-optimal outer univariate approximant of the block-count AND: with blocks
of size s = n/l, the composition q(b) = p(#full blocks) has degree
s * deg(p), its pointwise error equals the outer minimax error exactly (the
inner ANDs are exact), and its parity-basis coefficients collapse to one
value per number of blocks touched, so weights are computed in closed form
instead of by expanding 2^n terms.

Symmetric functions are sums of point indicators over their support; the sum
is aggregated weight-class by weight-class (a sign-flip average with a closed
form) and then symmetrised over variable relabelings, which never increases
weight or error and makes the exact per-weight error certificate a single
Kravchuk evaluation.  The shared outer polynomial is chosen by the
union-bound rule (per-term error at most eps/|supp|) whenever some block
split meets it; when no split does, the same polynomial is re-optimised by a
second LP directly against the exact aggregate certificate, which is strictly
stronger than the union bound and keeps the construction otherwise unchanged.

The dual side pairs an LP certificate against all characters of size at most
K: a degree-K polynomial of weight W can correlate with the witness by at
most W times the largest character pairing, which rearranges into a weight
lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb

from .approxlab import LPDualCertificate, MinimaxInstance, minimax_lp
from .boolcube import ParityPoly, bits_to_mask, kravchuk
from .errors import PropertyViolation
from .simplex import solve_linf_fit

_TERM_CAP = 1 << 21


class InfeasibleBudget(Exception):
    """No block split meets the error target; carries the best error per split."""

    def __init__(self, message: str, best_errors: dict[int, Fraction]):
        super().__init__(message)
        self.best_errors = best_errors


@dataclass(frozen=True)
class WeightDegreeReport:
    degree: int
    weight: Fraction
    error: Fraction
    bound_exponent: float


@dataclass(frozen=True)
class SymmetricSpec:
    """A symmetric predicate by its weight-value vector."""

    n: int
    predicate: tuple[int, ...]

    def __post_init__(self):
        if len(self.predicate) != self.n + 1:
            raise ValueError("predicate must have length n+1")
        if any(v not in (0, 1) for v in self.predicate):
            raise ValueError("predicate values must be 0/1")

    @property
    def k_f(self) -> int:
        """Smallest i with the predicate constant on weights in [i+1, n-i-1]."""
        for i in range(self.n + 1):
            mid = self.predicate[i + 1 : self.n - i]
            if all(v == mid[0] for v in mid) if mid else True:
                return i
        return self.n


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _finite_differences(p_values: list[Fraction]) -> list[Fraction]:
    """Multilinear coefficients over 0/1 block indicators: c_u = Delta^u p(0)."""
    ell = len(p_values) - 1
    return [
        sum(
            ((-1) ** (u - i) * comb(u, i) * p_values[i] for i in range(u + 1)),
            Fraction(0),
        )
        for u in range(ell + 1)
    ]


def _touched_block_coeffs(c: list[Fraction], ell: int, s: int) -> list[Fraction]:
    """Parity coefficient per touched-block count.

    The parity coefficient of a subset S touching r blocks is
    (-1)^{|S|} D_r with D_r = sum_{u >= r} C(ell-r, u-r) c_u 2^{-su}.
    """
    return [
        sum(
            (
                comb(ell - r, u - r) * c[u] / Fraction(2) ** (s * u)
                for u in range(r, ell + 1)
                if c[u]
            ),
            Fraction(0),
        )
        for r in range(ell + 1)
    ]


@dataclass(frozen=True)
class _AndCore:
    """Outer/inner decomposition data for the n-bit AND approximant."""

    n: int
    ell: int  # number of blocks
    s: int  # block size
    p_values: tuple[Fraction, ...]  # outer polynomial at counts 0..ell
    error: Fraction  # max_j |p(j) - [j == ell]|
    D: tuple[Fraction, ...]  # parity coefficient per touched-block count

    @property
    def degree(self) -> int:
        top = max((r for r, v in enumerate(self.D) if v), default=0)
        return self.s * top

    def weight(self) -> Fraction:
        per_block = (1 << self.s) - 1
        return sum(
            (
                comb(self.ell, r) * Fraction(per_block) ** r * abs(v)
                for r, v in enumerate(self.D)
                if v
            ),
            Fraction(0),
        )


def _and_core_for_split(n: int, ell: int, degree_budget: int) -> _AndCore:
    s = n // ell
    outer_degree = min(ell, degree_budget // s)
    values = [Fraction(0)] * ell + [Fraction(1)]
    points = [Fraction(j) for j in range(ell + 1)]
    poly, eps, _ = minimax_lp(MinimaxInstance.of(points, values, outer_degree))
    p_values = [poly(Fraction(j)) for j in range(ell + 1)]
    c = _finite_differences(p_values)
    assert all(v == 0 for v in c[outer_degree + 1 :]), "differences above the degree"
    return _AndCore(
        n=n,
        ell=ell,
        s=s,
        p_values=tuple(p_values),
        error=eps,
        D=tuple(_touched_block_coeffs(c, ell, s)),
    )


def _and_approx_core(n: int, degree_budget: int, error_target: Fraction) -> _AndCore:
    """Best split: exhaustive over divisors of n, minimum weight subject to
    degree <= budget and certified error <= target."""
    if degree_budget < 1:
        raise ValueError("degree budget must be at least 1")
    best: _AndCore | None = None
    best_errors: dict[int, Fraction] = {}
    for ell in _divisors(n):
        core = _and_core_for_split(n, ell, degree_budget)
        best_errors[ell] = core.error
        if core.error <= error_target and (
            best is None or (core.weight(), core.ell) < (best.weight(), best.ell)
        ):
            best = core
    if best is None:
        raise InfeasibleBudget(
            f"no block split of n={n} meets error {error_target} at degree "
            f"{degree_budget}; best errors per split: "
            + ", ".join(f"l={l}: {float(e):.4g}" for l, e in sorted(best_errors.items())),
            best_errors,
        )
    return best


def _materialize(core: _AndCore) -> ParityPoly:
    """Expand the block-structured approximant into an explicit ParityPoly."""
    n, ell, s = core.n, core.ell, core.s
    active = [r for r, v in enumerate(core.D) if v]
    total_terms = sum(comb(ell, r) * ((1 << s) - 1) ** r for r in active)
    if total_terms > _TERM_CAP:
        raise ValueError(f"materialisation would need {total_terms} terms")
    block_subsets = [[m << (j * s) for m in range(1, 1 << s)] for j in range(ell)]
    coeffs: dict[int, Fraction] = {}
    for r in active:
        d_r = core.D[r]
        for blocks in combinations(range(ell), r):
            for parts in product(*(block_subsets[j] for j in blocks)):
                mask = 0
                for p in parts:
                    mask |= p
                coeffs[mask] = -d_r if mask.bit_count() & 1 else d_r
    return ParityPoly(n, coeffs)


def approx_eq_y(
    n: int, y, degree_budget: int, error_target
) -> tuple[ParityPoly, WeightDegreeReport]:
    """Low-weight approximant of the point indicator EQ_y on {0,1}^n.

    EQ_y is the n-bit AND with the variables at y's zero positions negated;
    negation only flips parity-coefficient signs, so weight, degree and the
    certified error are those of the AND construction.  The error is exact:
    the composition's value depends on the input only through the full-block
    count, and the outer LP residuals enumerate every count.
    """
    error_target = Fraction(error_target)
    y_mask = y if isinstance(y, int) else bits_to_mask(y)
    core = _and_approx_core(n, degree_budget, error_target)
    poly = _materialize(core)
    zeros_mask = ((1 << n) - 1) ^ y_mask
    if zeros_mask:
        poly = poly.negate_vars(zeros_mask)
    report = WeightDegreeReport(
        degree=core.degree,
        weight=core.weight(),
        error=core.error,
        bound_exponent=_trend_exponent(n, 1, error_target, degree_budget),
    )
    return poly, report


def _trend_exponent(n: int, supp_size: int, eps: Fraction, budget: int) -> float:
    """n * log(supp/eps) * log(n) / budget: the upper-bound trend to compare
    measured weights against."""
    return n * math.log(float(supp_size / eps)) * math.log(n) / budget


def _block_count_poly(s: int, r: int) -> list[int]:
    """Coefficients of ((1+z)^s - 1)^r: subset sizes touching r fixed blocks."""
    base = [comb(s, i) for i in range(s + 1)]
    base[0] -= 1  # exclude the empty choice per block
    out = [1]
    for _ in range(r):
        nxt = [0] * (len(out) + s)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(base):
                    if b:
                        nxt[i + j] += a * b
        out = nxt
    return out


def _kappa_sums(n: int, supp_weights: list[int]) -> list[Fraction]:
    """sum over the support classes of kappa_h(m) = sum_j (-1)^j C(m,j) C(n-m, n-h-j),
    the sign-flip multiplier a size-m parity coefficient picks up when the AND
    approximant is summed over all targets y of weight h."""
    out = []
    for m in range(n + 1):
        total = 0
        for h in supp_weights:
            total += sum(
                (-1) ** j * comb(m, j) * comb(n - m, n - h - j)
                for j in range(max(0, m - h), min(m, n - h) + 1)
            )
        out.append(Fraction(total))
    return out


def _chat_from_core(
    n: int, ell: int, s: int, D: tuple[Fraction, ...], kappa: list[Fraction]
) -> list[Fraction]:
    """Per-size parity coefficients of the symmetrised class-aggregated sum."""
    chat = [Fraction(0)] * (n + 1)
    for r, d_r in enumerate(D):
        if not d_r:
            continue
        counts = _block_count_poly(s, r)
        scale = comb(ell, r)
        for m, cnt in enumerate(counts):
            if cnt:
                chat[m] += d_r * scale * cnt * (-1) ** m
    for m in range(n + 1):
        if chat[m]:
            chat[m] = chat[m] * kappa[m] / comb(n, m)
    return chat


def _symmetric_values(chat: list[Fraction], n: int) -> list[Fraction]:
    """Value of the symmetric polynomial at each Hamming weight."""
    return [
        sum((chat[m] * kravchuk(n, m, h) for m in range(n + 1) if chat[m]), Fraction(0))
        for h in range(n + 1)
    ]


def _max_error(values: list[Fraction], predicate) -> Fraction:
    return max(abs(v - p) for v, p in zip(values, predicate))


def low_weight_approximant(
    spec: SymmetricSpec, K: int, eps
) -> tuple[ParityPoly, WeightDegreeReport]:
    """Low-weight degree-<=K approximant of a symmetric predicate.

    Writes the minority side as a sum of point indicators over its support,
    approximates every indicator by one shared block-composed AND polynomial,
    aggregates weight-class by weight-class in closed form, symmetrises, and
    certifies the total error exactly at every Hamming weight.  The shared
    polynomial follows the union-bound target eps/|supp| when achievable and
    is otherwise re-optimised against the exact aggregate certificate.
    """
    eps = Fraction(eps)
    if K < 1:
        raise ValueError("K must be at least 1")
    n = spec.n
    pred = spec.predicate
    mid = pred[spec.k_f + 1 : n - spec.k_f]
    middle_value = (
        mid[0] if mid else (1 if _side_mass(spec, 1) < _side_mass(spec, 0) else 0)
    )
    complemented = middle_value == 1
    work = tuple(1 - v for v in pred) if complemented else pred
    supp_weights = [h for h, v in enumerate(work) if v]
    supp_size = sum(comb(n, h) for h in supp_weights)
    if supp_size == 0:
        poly = ParityPoly(n, {0: Fraction(1)} if complemented else {})
        return poly, WeightDegreeReport(0, poly.weight(), Fraction(0), 0.0)
    per_term = eps / supp_size

    if supp_weights in ([0], [n]):
        # a single point indicator: the direct construction, unchanged
        y_mask = (1 << n) - 1 if supp_weights == [n] else 0
        poly, rep = approx_eq_y(n, y_mask, K, per_term)
        if complemented:
            poly = _complement(poly)
        return poly, WeightDegreeReport(
            degree=poly.degree(),
            weight=poly.weight(),
            error=rep.error,
            bound_exponent=_trend_exponent(n, supp_size, eps, K),
        )

    kappa = _kappa_sums(n, supp_weights)
    candidates: list[tuple[Fraction, int, list[Fraction], Fraction]] = []
    union_feasible = False
    best_errors: dict[int, Fraction] = {}
    for ell in _divisors(n):
        core = _and_core_for_split(n, ell, K)
        best_errors[ell] = core.error
        if core.error > per_term:
            continue
        union_feasible = True
        chat = _chat_from_core(n, ell, core.s, core.D, kappa)
        error = _max_error(_symmetric_values(chat, n), work)
        if error > eps:
            raise PropertyViolation(
                f"aggregate error {error} exceeded eps={eps} despite the union bound"
            )
        weight = _chat_weight(chat, n, complemented)
        candidates.append((weight, ell, chat, error))
    if not union_feasible:
        # no split meets the per-term target: optimise the shared outer
        # polynomial against the exact aggregate certificate instead
        for ell in _divisors(n):
            s = n // ell
            d_out = min(ell, K // s)
            chat, error = _aggregate_optimal(n, ell, s, d_out, supp_weights, work, kappa)
            best_errors[ell] = min(best_errors.get(ell, error), error)
            if error <= eps:
                weight = _chat_weight(chat, n, complemented)
                candidates.append((weight, ell, chat, error))
    if not candidates:
        raise InfeasibleBudget(
            f"degree budget K={K} cannot reach error {eps} for this predicate; "
            "best certified error per split: "
            + ", ".join(f"l={l}: {float(e):.4g}" for l, e in sorted(best_errors.items())),
            best_errors,
        )
    weight, ell, chat, error = min(candidates, key=lambda c: (c[0], c[1]))
    if complemented:
        chat = [Fraction(1) - chat[0]] + [-v for v in chat[1:]]
        error = _max_error(_symmetric_values(chat, n), pred)
    degree = max((m for m, v in enumerate(chat) if v), default=0)
    poly = _symmetric_parity_poly(n, chat)
    return poly, WeightDegreeReport(
        degree=degree,
        weight=weight,
        error=error,
        bound_exponent=_trend_exponent(n, supp_size, eps, K),
    )


def _chat_weight(chat: list[Fraction], n: int, complemented: bool) -> Fraction:
    w = sum((comb(n, m) * abs(v) for m, v in enumerate(chat) if m and v), Fraction(0))
    head = abs(Fraction(1) - chat[0]) if complemented else abs(chat[0])
    return w + head


def _aggregate_optimal(
    n: int,
    ell: int,
    s: int,
    d_out: int,
    supp_weights: list[int],
    work: tuple[int, ...],
    kappa: list[Fraction],
) -> tuple[list[Fraction], Fraction]:
    """Outer polynomial minimising the exact aggregated per-weight error.

    The map from the outer polynomial's values at block counts 0..ell to the
    aggregate's values at Hamming weights 0..n is linear; composing it with
    the Vandermonde in the polynomial coefficients gives a plain L-infinity
    fitting problem solved by the exact LP.
    """
    columns = []
    for j in range(ell + 1):
        e_j = [Fraction(int(i == j)) for i in range(ell + 1)]
        D = _touched_block_coeffs(_finite_differences(e_j), ell, s)
        chat_j = _chat_from_core(n, ell, s, tuple(D), kappa)
        columns.append(_symmetric_values(chat_j, n))
    rows = [
        [
            sum(columns[j][h] * Fraction(j) ** r for j in range(ell + 1))
            for r in range(d_out + 1)
        ]
        for h in range(n + 1)
    ]
    fit = solve_linf_fit(rows, [Fraction(v) for v in work])
    p_values = [
        sum(fit.coeffs[r] * Fraction(j) ** r for r in range(d_out + 1))
        for j in range(ell + 1)
    ]
    D = _touched_block_coeffs(_finite_differences(p_values), ell, s)
    chat = _chat_from_core(n, ell, s, tuple(D), kappa)
    error = _max_error(_symmetric_values(chat, n), work)
    assert error == fit.epsilon, "aggregate map disagrees with the LP residuals"
    return chat, error


def _side_mass(spec: SymmetricSpec, side: int) -> int:
    return sum(comb(spec.n, h) for h, v in enumerate(spec.predicate) if v == side)


def _complement(poly: ParityPoly) -> ParityPoly:
    out = {s: -c for s, c in poly.coeffs.items()}
    out[0] = Fraction(1) + out.get(0, Fraction(0))
    return ParityPoly(poly.n, out)


def _symmetric_parity_poly(n: int, chat: list[Fraction]) -> ParityPoly:
    active = [m for m, v in enumerate(chat) if v]
    total = sum(comb(n, m) for m in active)
    if total > _TERM_CAP:
        raise ValueError(f"materialisation would need {total} terms")
    coeffs: dict[int, Fraction] = {}
    for m in active:
        for idxs in combinations(range(n), m):
            coeffs[sum(1 << i for i in idxs)] = chat[m]
    return ParityPoly(n, coeffs)


def weight_lower_bound(
    cert: LPDualCertificate, K: int, target_error
) -> Fraction | float:
    """Certified floor on the weight of any degree-<=K approximant with error
    <= target_error, from the witness's largest character pairing.

    For a symmetric witness only the K+1 size-classes matter: the pairing with
    any chi_S depends on |S| alone.  Returns math.inf when every pairing up to
    size K vanishes (then no weight suffices at that degree).
    """
    target_error = Fraction(target_error)
    n = cert.grid_n()
    psi = cert.psi  # weight-class masses
    best = Fraction(0)
    for r in range(K + 1):
        # <psi, chi_S> = sum_h psi[h] * kravchuk(n, h, r) / C(n, h)
        pairing = sum(
            (
                p * Fraction(kravchuk(n, h, r), comb(n, h))
                for h, p in enumerate(psi)
                if p
            ),
            Fraction(0),
        )
        best = max(best, abs(pairing))
    if best == 0:
        return math.inf
    return (cert.epsilon - target_error) / best
