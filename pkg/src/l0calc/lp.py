"""Exact rational simplex for ``max c·x  s.t.  A x ≤ b, x ≥ 0`` with ``b ≥ 0``.

The origin is then feasible, so no phase one is needed.  The solver keeps a
dictionary (basic variables written in terms of the nonbasic ones), which
costs ``m × n`` entries rather than a full ``m × (n + m)`` tableau; that
matters for the domination LP where ``m = 2^n − 1``.

Pivoting follows Bland's rule: the entering variable is the lowest-index
nonbasic with positive reduced cost, the leaving variable the lowest-index
basic among the ratio-test ties.  Variables ``0..n-1`` are the structural
ones, ``n..n+m-1`` the slacks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import InvalidInput, VerificationError


@dataclass(frozen=True)
class RationalLP:
    c: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(Fraction(v) for v in self.c)
        A = tuple(tuple(Fraction(v) for v in row) for row in self.A)
        b = tuple(Fraction(v) for v in self.b)
        if len(A) != len(b):
            raise InvalidInput(f"{len(A)} constraint rows but {len(b)} right-hand sides")
        if any(len(row) != len(c) for row in A):
            raise InvalidInput("constraint row length differs from the variable count")
        if any(v < 0 for v in b):
            raise InvalidInput("right-hand sides must be nonnegative (origin-feasible form)")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.b), len(self.c)


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    pivots: int


class Unbounded(Exception):
    pass


def solve(lp: RationalLP) -> LPSolution:
    """Optimal primal ``x`` and dual ``y`` of ``lp``, both exact.

    Raises :class:`Unbounded` if the objective has no maximum, and
    :class:`VerificationError` if the pivot count exceeds ``C(m+n, n)``
    (which Bland's rule makes impossible).
    """
    m, n = lp.shape
    rows = [list(r) for r in lp.A]
    rhs = list(lp.b)
    obj = list(lp.c)
    z = Fraction(0)
    basic = [n + i for i in range(m)]
    nonbasic = list(range(n))
    cap = comb(m + n, n)
    pivots = 0

    while True:
        entering = None
        for j in sorted(range(n), key=lambda j: nonbasic[j]):
            if obj[j] > 0:
                entering = j
                break
        if entering is None:
            break
        e = entering
        leave, best = None, None
        for i in range(m):
            a = rows[i][e]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basic[i] < basic[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise Unbounded(f"variable {nonbasic[e]} can grow without bound")
        pivots += 1
        if pivots > cap:
            raise VerificationError(f"simplex exceeded the pivot cap {cap}; cycling under Bland's rule is impossible")

        r = leave
        prow = rows[r]
        piv = prow[e]
        new_row = [v / piv for v in prow]
        new_row[e] = 1 / piv
        new_rhs = rhs[r] / piv
        rows[r], rhs[r] = new_row, new_rhs
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[e]
            if f == 0:
                continue
            for j in range(n):
                if j != e and new_row[j]:
                    row[j] -= f * new_row[j]
            row[e] = -f * new_row[e]
            rhs[i] -= f * new_rhs
        ce = obj[e]
        for j in range(n):
            if j != e and new_row[j]:
                obj[j] -= ce * new_row[j]
        obj[e] = -ce * new_row[e]
        z += ce * new_rhs
        basic[r], nonbasic[e] = nonbasic[e], basic[r]

    x = [Fraction(0)] * n
    for i, var in enumerate(basic):
        if var < n:
            x[var] = rhs[i]
    y = [Fraction(0)] * m
    for j, var in enumerate(nonbasic):
        if var >= n:
            y[var - n] = -obj[j]
    return LPSolution(z, tuple(x), tuple(y), pivots)


def check_optimality(lp: RationalLP, sol: LPSolution) -> None:
    """Replay primal feasibility, dual feasibility and strong duality exactly."""
    m, n = lp.shape
    if any(v < 0 for v in sol.x):
        raise VerificationError("negative primal variable")
    if any(v < 0 for v in sol.y):
        raise VerificationError("negative dual variable")
    for i in range(m):
        lhs = sum((a * v for a, v in zip(lp.A[i], sol.x) if a), Fraction(0))
        if lhs > lp.b[i]:
            raise VerificationError(f"primal constraint {i} violated: {lhs} > {lp.b[i]}")
    for j in range(n):
        col = sum((lp.A[i][j] * sol.y[i] for i in range(m) if sol.y[i]), Fraction(0))
        if col < lp.c[j]:
            raise VerificationError(f"dual constraint {j} violated: {col} < {lp.c[j]}")
    primal = sum((c * v for c, v in zip(lp.c, sol.x)), Fraction(0))
    dual = sum((b * v for b, v in zip(lp.b, sol.y)), Fraction(0))
    if not primal == dual == sol.value:
        raise VerificationError(f"strong duality fails: primal {primal}, dual {dual}, reported {sol.value}")


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPSolution:
    lp = RationalLP(tuple(c), tuple(tuple(r) for r in A), tuple(b))
    sol = solve(lp)
    check_optimality(lp, sol)
    return sol
