"""Two-phase dense-tableau simplex over Fractions with Bland's rule.

Small, exact and slow on purpose; intended for LPs with a few dozen rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

SENSES = ("<=", ">=", "=")


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    pivots: int = 0


def _pivot(rows, basis, i, j):
    piv = rows[i][j]
    rows[i] = [v / piv for v in rows[i]]
    for k, row in enumerate(rows):
        if k != i and row[j] != 0:
            f = row[j]
            rows[k] = [a - f * b for a, b in zip(row, rows[i])]
    basis[i] = j


def _optimize(rows, basis, cost, allowed, max_pivots):
    """Minimize ``cost`` over the tableau in place. Returns (status, pivots)."""
    pivots = 0
    ncols = len(cost)
    while True:
        reduced = [cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(len(rows)))
                   for j in range(ncols)]
        entering = next((j for j in range(ncols) if allowed[j] and reduced[j] < 0), None)
        if entering is None:
            return "optimal", pivots
        best = None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", pivots
        _pivot(rows, basis, best[1], entering)
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence, senses: Sequence[str],
             max_pivots: int = 10_000) -> LpResult:
    """Minimize ``c.x`` subject to ``A x (sense) b`` row-wise and ``x >= 0``."""
    m, n = len(A), len(c)
    if len(b) != m or len(senses) != m or any(len(row) != n for row in A):
        raise ValueError("inconsistent LP dimensions")
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    senses = list(senses)
    for i in range(m):
        if senses[i] not in SENSES:
            raise ValueError(f"unknown constraint sense {senses[i]!r}")
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
            senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]

    n_slack = sum(1 for s in senses if s != "=")
    n_art = sum(1 for s in senses if s != "<=")
    width = n + n_slack + n_art
    rows, basis = [], []
    si, ai = n, n + n_slack
    for i in range(m):
        row = A[i] + [Fraction(0)] * (n_slack + n_art) + [b[i]]
        if senses[i] == "<=":
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        else:
            if senses[i] == ">=":
                row[si] = Fraction(-1)
                si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        rows.append(row)

    artificial = [j >= n + n_slack for j in range(width)]
    phase1 = [Fraction(1) if artificial[j] else Fraction(0) for j in range(width)]
    _, p1 = _optimize(rows, basis, phase1, [True] * width, max_pivots)
    if sum(rows[i][-1] for i in range(len(rows)) if artificial[basis[i]]) > 0:
        return LpResult("infeasible", pivots=p1)

    # drive remaining (zero-valued) artificials out, dropping redundant rows
    i = 0
    while i < len(rows):
        if artificial[basis[i]]:
            j = next((j for j in range(width) if not artificial[j] and rows[i][j] != 0), None)
            if j is None:
                del rows[i], basis[i]
                continue
            _pivot(rows, basis, i, j)
        i += 1

    cost = [Fraction(v) for v in c] + [Fraction(0)] * (n_slack + n_art)
    allowed = [not a for a in artificial]
    status, p2 = _optimize(rows, basis, cost, allowed, max_pivots)
    if status != "optimal":
        return LpResult(status, pivots=p1 + p2)
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    value = sum((cost[j] * x[j] for j in range(width)), Fraction(0))
    return LpResult("optimal", value, tuple(x[:n]), p1 + p2)
