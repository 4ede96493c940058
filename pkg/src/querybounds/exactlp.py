"""Exact rational simplex for small linear programs.

Solves ``max c.z`` subject to ``A z <= b``, ``z >= 0`` with ``b >= 0``, so
the slack basis is feasible at the start and no phase one is needed.
Pivoting follows Bland's rule (smallest entering index with positive
reduced cost, ratio ties broken by smallest basic index), which is
deterministic and cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class UnboundedError(ArithmeticError):
    pass


@dataclass
class LPResult:
    value: Fraction
    solution: list[Fraction]
    pivots: int
    stopped_early: bool = False


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence,
             target: Fraction | None = None, max_pivots: int = 100_000) -> LPResult:
    """Optimal vertex of ``max c.z, A z <= b, z >= 0`` in exact arithmetic.

    With ``target`` set the search stops as soon as the objective reaches
    it; the returned point is still feasible.
    """
    m, nvar = len(A), len(c)
    b = [Fraction(v) for v in b]
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")
    width = nvar + m
    # rows hold [coefficients..., rhs]; slacks occupy columns nvar..nvar+m-1
    rows: list[list[Fraction]] = []
    for r in range(m):
        row = [Fraction(v) for v in A[r]] + [Fraction(0)] * m + [b[r]]
        row[nvar + r] = Fraction(1)
        rows.append(row)
    # reduced-cost row for the objective, stored as -c so that z_j - c_j < 0 means improving
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [nvar + r for r in range(m)]
    pivots = 0
    stopped = False
    while True:
        if target is not None and obj[-1] >= target:
            stopped = True
            break
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for r in range(m):
            a = rows[r][enter]
            if a > 0:
                ratio = rows[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave, best = r, ratio
        if leave is None:
            raise UnboundedError("objective is unbounded")
        _pivot(rows, obj, leave, enter)
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")
    z = [Fraction(0)] * nvar
    for r, j in enumerate(basis):
        if j < nvar:
            z[j] = rows[r][-1]
    return LPResult(obj[-1], z, pivots, stopped)


def _pivot(rows, obj, leave, enter):
    prow = rows[leave]
    inv = 1 / prow[enter]
    nz = [(j, v * inv) for j, v in enumerate(prow) if v]
    for j, v in nz:
        prow[j] = v
    for row in rows + [obj]:
        if row is prow:
            continue
        f = row[enter]
        if f:
            for j, v in nz:
                row[j] -= f * v


def solve_exact(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A solution of ``A z = b`` in rationals, or ``None`` when inconsistent.

    Gaussian elimination with the first nonzero pivot in each column; free
    variables are set to zero.
    """
    m = len(A)
    nvar = len(A[0]) if m else 0
    M = [[Fraction(v) for v in A[r]] + [Fraction(b[r])] for r in range(m)]
    pivots = []
    r = 0
    for col in range(nvar):
        p = next((k for k in range(r, m) if M[k][col]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for k in range(m):
            if k != r and M[k][col]:
                f = M[k][col]
                M[k] = [a - f * c for a, c in zip(M[k], M[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(M[k][-1] for k in range(r, m)):
        return None
    z = [Fraction(0)] * nvar
    for k, col in enumerate(pivots):
        z[col] = M[k][-1]
    return z
