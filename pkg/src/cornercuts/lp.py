"""Tiny exact LPs: ``min c.s  s.t.  A s >= b, s >= 0`` over Fractions.

Two-phase tableau simplex with Bland's rule.  The problems solved here
have at most a handful of rows and columns, so dense lists are fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .geom2d import rat


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SmallLP:
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]  # (coeffs, rhs), sense >=

    def __post_init__(self):
        obj = tuple(rat(c) for c in self.objective)
        if not obj:
            raise ValueError("LP needs at least one variable")
        rows = []
        for coeffs, rhs in self.rows:
            coeffs = tuple(rat(c) for c in coeffs)
            if len(coeffs) != len(obj):
                raise ValueError("row width differs from objective width")
            rows.append((coeffs, rat(rhs)))
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def covering(cls, coeff_rows: Sequence[Sequence]) -> SmallLP:
        """``min sum(s)`` subject to ``row . s >= 1`` for every row."""
        n = len(coeff_rows[0])
        return cls(tuple(Fraction(1) for _ in range(n)),
                   tuple((tuple(r), Fraction(1)) for r in coeff_rows))


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    row = [x / piv for x in T[r]]
    T[r] = row
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            k = T[i][c]
            T[i] = [a - k * b for a, b in zip(T[i], row)]
    basis[r] = c


def _run(T, basis, cost_row: int, allowed: int) -> bool:
    """Simplex iterations on ``T`` against the reduced-cost row.

    Only columns < ``allowed`` may enter.  Returns False if unbounded.
    """
    m = len(basis)
    while True:
        z = T[cost_row]
        enter = next((j for j in range(allowed) if z[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(M)
    A = [row[:] + [b] for row, b in zip(M, rhs)]
    for col in range(n):
        p = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[p] = A[p], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                k = A[i][col]
                A[i] = [a - k * b for a, b in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


def solve_min(lp: SmallLP) -> LpSolution:
    c = list(lp.objective)
    n, m = len(c), len(lp.rows)
    if m == 0:
        if any(x < 0 for x in c):
            return LpSolution(LpStatus.UNBOUNDED)
        return LpSolution(LpStatus.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in c), ())

    # columns: s (n) | surplus e (m) | artificials (m) | rhs
    zero, one = Fraction(0), Fraction(1)
    width = n + 2 * m
    T: list[list[Fraction]] = []
    basis: list[int] = []
    flipped = []
    for i, (coeffs, rhs) in enumerate(lp.rows):
        row = list(coeffs) + [zero] * (2 * m) + [rhs]
        row[n + i] = -one
        if rhs < 0:
            row = [-x for x in row]
            flipped.append(True)
            basis.append(n + i)
        else:
            flipped.append(False)
            row[n + m + i] = one
            basis.append(n + m + i)
        T.append(row)

    # phase 1: minimise the sum of artificials
    art = [n + m + i for i in range(m) if not flipped[i]]
    z = [zero] * (width + 1)
    for i in range(m):
        if not flipped[i]:
            z = [a - b for a, b in zip(z, T[i])]
    for j in art:
        z[j] = zero
    T.append(z)
    _run(T, basis, m, n + m)
    if T[m][-1] != 0:
        return LpSolution(LpStatus.INFEASIBLE)
    T.pop()

    # drive leftover artificials out; drop rows that are redundant
    keep = []
    for i in range(m):
        if basis[i] >= n + m:
            j = next((j for j in range(n + m) if T[i][j] != 0), None)
            if j is None:
                continue
            _pivot(T, basis, i, j)
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    rows_kept = keep

    # phase 2
    cost = c + [zero] * (2 * m)
    z = cost[:] + [zero]
    for i, bj in enumerate(basis):
        if cost[bj] != 0:
            z = [a - cost[bj] * b for a, b in zip(z, T[i])]
    T.append(z)
    if not _run(T, basis, len(basis), n + m):
        return LpSolution(LpStatus.UNBOUNDED)

    primal = [zero] * (n + m)
    for i, bj in enumerate(basis):
        primal[bj] = T[i][-1]
    s = tuple(primal[:n])
    value = sum((ci * si for ci, si in zip(c, s)), zero)

    # duals from B^T y = c_B on the original standardised columns
    def column(j, i):
        coeffs, _ = lp.rows[i]
        x = coeffs[j] if j < n else (-one if j - n == i else zero)
        return -x if flipped[i] else x

    B = [[column(bj, i) for i in rows_kept] for bj in basis]  # rows of B^T
    y_kept = _solve_square(B, [cost[bj] for bj in basis])
    dual = [zero] * m
    for i, y in zip(rows_kept, y_kept):
        dual[i] = -y if flipped[i] else y
    return LpSolution(LpStatus.OPTIMAL, value, s, tuple(dual))


def check_optimality(lp: SmallLP, sol: LpSolution) -> bool:
    """Exact primal/dual feasibility, zero gap and complementary slackness."""
    if sol.status is not LpStatus.OPTIMAL:
        return False
    s, y = sol.primal, sol.dual
    if any(x < 0 for x in s) or any(x < 0 for x in y):
        return False
    acts = [sum(a * x for a, x in zip(coeffs, s)) for coeffs, _ in lp.rows]
    if any(act < rhs for act, (_, rhs) in zip(acts, lp.rows)):
        return False
    for j, cj in enumerate(lp.objective):
        red = cj - sum(y[i] * lp.rows[i][0][j] for i in range(len(lp.rows)))
        if red < 0 or (s[j] != 0 and red != 0):
            return False
    if any(y[i] != 0 and acts[i] != lp.rows[i][1] for i in range(len(lp.rows))):
        return False
    dual_value = sum(y[i] * lp.rows[i][1] for i in range(len(lp.rows)))
    return dual_value == sol.value


def dual_closed_form_3(a, b, c) -> Fraction:
    """Optimum of the 3x3 covering LP with diagonal (1+a, 1+b, 1+c).

    Equals ``1 - 1/(1 + 1/a + 1/b + 1/c)``.
    """
    a, b, c = rat(a), rat(b), rat(c)
    if min(a, b, c) <= 0:
        raise ValueError("a, b, c must be positive")
    return 1 - 1 / (1 + 1 / a + 1 / b + 1 / c)


def dual_closed_form_2(a, b) -> Fraction:
    """Optimum of ``min s1+s2+s3`` with rows (1+a, 1, 1) and (1, 1+b, 1)."""
    a, b = rat(a), rat(b)
    if min(a, b) <= 0:
        raise ValueError("a, b must be positive")
    return 1 - 1 / (1 + 1 / a + 1 / b)


def covering_matrix_3(a, b, c) -> SmallLP:
    a, b, c = rat(a), rat(b), rat(c)
    one = Fraction(1)
    return SmallLP.covering([(1 + a, one, one), (one, 1 + b, one), (one, one, 1 + c)])
