"""Dense exact-rational simplex and discrete minimax approximation.

The solver is a textbook two-phase primal simplex with Bland's anti-cycling
rule on Fraction tableaus.  Problems here have at most a few hundred columns
and a handful of rows, so exactness wins over speed; no floating point enters
the trust path.  The artificial columns are kept through phase two (barred
from entering), which makes them a running copy of B^{-1} and lets the dual
vector be read off the final tableau.

The minimax wrapper solves the moment form of discrete Chebyshev
approximation directly: variables are the positive and negative parts of a
signed measure psi on the points, constrained to annihilate all powers up to
the degree and to have unit total variation, maximising the pairing with the
target values.  The LP dual variables are then exactly the approximating
polynomial's coefficients together with the minimax error, and all the
complementary-slackness facts are asserted before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ratpoly import RationalPoly


class SimplexError(Exception):
    pass


def solve_lp(
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    c: Sequence[Fraction],
) -> tuple[list[Fraction], Fraction, list[Fraction]]:
    """Maximise c.x subject to A x = b, x >= 0 (all exact rationals).

    Returns (x, value, y) where y is a dual optimum: y.A_j >= c_j for all j,
    with equality whenever x_j > 0, and y.b == value == c.x.  These facts are
    asserted on the result.  Raises SimplexError when infeasible or unbounded.
    """
    m, n = len(A), len(A[0])
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    flips = [1] * m
    for i in range(m):
        if b[i] < 0:
            flips[i] = -1
            b[i] = -b[i]
            A[i] = [-v for v in A[i]]

    ncols = n + m  # artificial column j corresponds to original row j - n
    tableau = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = list(range(n, n + m))

    def pivot(row: int, col: int) -> None:
        piv = tableau[row][col]
        tableau[row] = [v / piv for v in tableau[row]]
        for r in range(len(tableau)):
            if r != row and tableau[r][col]:
                f = tableau[r][col]
                tableau[r] = [v - f * w for v, w in zip(tableau[r], tableau[row])]
        basis[row] = col

    def run(cost: list[Fraction], allowed: int) -> None:
        """Bland's rule: smallest improving column enters, smallest basic leaves."""
        while True:
            cb = [cost[v] for v in basis]
            in_basis = set(basis)
            enter = -1
            for j in range(allowed):
                if j in in_basis:
                    continue
                reduced = cost[j] - sum(
                    cbi * tableau[i][j] for i, cbi in enumerate(cb) if cbi
                )
                if reduced > 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave, best = -1, None
            for i in range(len(tableau)):
                a = tableau[i][enter]
                if a > 0:
                    ratio = tableau[i][-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and basis[i] < basis[leave])
                    ):
                        best, leave = ratio, i
            if leave < 0:
                raise SimplexError("unbounded")
            pivot(leave, enter)

    # phase 1: drive the artificial mass to zero
    phase1_cost = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1_cost, ncols)
    if sum(tableau[i][-1] for i in range(len(tableau)) if basis[i] >= n) != 0:
        raise SimplexError("infeasible")
    # pivot basic artificials out; rows that cannot be pivoted are redundant
    for i in range(len(tableau)):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    keep = [i for i in range(len(tableau)) if basis[i] < n]
    dropped_originals = {
        basis[i] - n for i in range(len(tableau)) if basis[i] >= n
    }
    tableau[:] = [tableau[i] for i in keep]
    basis[:] = [basis[i] for i in keep]

    # phase 2: original objective; artificials may not re-enter
    phase2_cost = list(c) + [Fraction(0)] * m
    run(phase2_cost, n)

    x = [Fraction(0)] * n
    for i, v in enumerate(basis):
        x[v] = tableau[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    y = [Fraction(0)] * m
    for art in range(m):
        if art in dropped_originals:
            continue
        col = n + art
        y[art] = flips[art] * sum(
            phase2_cost[basis[i]] * tableau[i][col]
            for i in range(len(tableau))
            if phase2_cost[basis[i]]
        )

    _audit(A, b, c, flips, x, value, y)
    return x, value, y


def _audit(A, b, c, flips, x, value, y) -> None:
    m, n = len(A), len(A[0])
    for i in range(m):
        lhs = sum(A[i][j] * x[j] for j in range(n) if x[j])
        if lhs != b[i]:
            raise AssertionError("primal infeasibility in the final tableau")
    if any(v < 0 for v in x):
        raise AssertionError("negative basic variable")
    for j in range(n):
        # A was stored row-flipped; undo the flips to audit against the input
        yaj = sum(y[i] * flips[i] * A[i][j] for i in range(m) if y[i])
        if yaj < c[j]:
            raise AssertionError("dual infeasibility at optimum")
        if x[j] > 0 and yaj != c[j]:
            raise AssertionError("complementary slackness violated")
    yb = sum(y[i] * flips[i] * b[i] for i in range(m) if y[i])
    if yb != value:
        raise AssertionError("strong duality gap")


@dataclass(frozen=True)
class LinfFit:
    coeffs: tuple[Fraction, ...]
    epsilon: Fraction
    psi: tuple[Fraction, ...]  # signed measure on the rows, total variation 1


def solve_linf_fit(rows: Sequence[Sequence[Fraction]], values: Sequence[Fraction]) -> LinfFit:
    """Exact Chebyshev fit min_a max_i |<rows_i, a> - values_i|.

    Returns the optimal coefficients, the optimal error, and the dual signed
    measure psi on the rows with  rows^T psi = 0,  sum |psi| = 1 (when the
    error is positive) and  <psi, values> = epsilon.  All optimality and
    complementary-slackness facts are asserted before returning.
    """
    rows = [[Fraction(v) for v in r] for r in rows]
    values = [Fraction(v) for v in values]
    m = len(rows)
    ncoef = len(rows[0]) if rows else 0
    if any(len(r) != ncoef for r in rows):
        raise ValueError("ragged design matrix")

    A = [[rows[i][r] for i in range(m)] + [-rows[i][r] for i in range(m)]
         for r in range(ncoef)]
    A.append([Fraction(1)] * (2 * m))
    b = [Fraction(0)] * ncoef + [Fraction(1)]
    c = values + [-v for v in values]

    x, eps, y = solve_lp(A, b, c)
    psi = tuple(x[i] - x[m + i] for i in range(m))
    coeffs = tuple(y[:ncoef])
    if y[ncoef] != eps:
        raise AssertionError("dual objective row disagrees with the LP value")

    residuals = [
        v - sum(a * r for a, r in zip(coeffs, row)) for row, v in zip(rows, values)
    ]
    if max(abs(r) for r in residuals) != eps:
        raise AssertionError("primal error does not match the LP optimum")
    for j in range(ncoef):
        if sum(p * rows[i][j] for i, p in enumerate(psi)) != 0:
            raise AssertionError("dual measure fails the annihilation conditions")
    if eps > 0:
        if sum(abs(p) for p in psi) != 1:
            raise AssertionError("dual measure does not have unit total variation")
        for i, p in enumerate(psi):
            if p > 0 and residuals[i] != eps:
                raise AssertionError("slack point carries positive dual mass")
            if p < 0 and residuals[i] != -eps:
                raise AssertionError("slack point carries negative dual mass")
    if sum(p * v for p, v in zip(psi, values)) != eps:
        raise AssertionError("dual pairing does not reproduce the error")
    return LinfFit(coeffs=coeffs, epsilon=eps, psi=psi)


@dataclass(frozen=True)
class MinimaxSolution:
    poly: RationalPoly
    epsilon: Fraction
    psi: tuple[Fraction, ...]  # signed measure on the points, total variation 1


def solve_minimax(
    points: Sequence[Fraction], values: Sequence[Fraction], degree: int
) -> MinimaxSolution:
    """Exact minimax fit of a degree-<=degree polynomial on a finite point set.

    Returns the optimal polynomial, the optimal sup error on the points, and
    the dual signed measure psi with sum psi_i t_i^j = 0 for all j <= degree,
    sum |psi_i| = 1 (when epsilon > 0) and sum psi_i f_i = epsilon.
    """
    points = [Fraction(p) for p in points]
    values = [Fraction(v) for v in values]
    m = len(points)
    if len(set(points)) != m:
        raise ValueError("points must be distinct")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    rows = [[t**j for j in range(degree + 1)] for t in points]
    fit = solve_linf_fit(rows, values)
    return MinimaxSolution(
        poly=RationalPoly.from_coeffs(fit.coeffs), epsilon=fit.epsilon, psi=fit.psi
    )
