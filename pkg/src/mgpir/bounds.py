"""Capacity bounds for G^(r), all in exact rational arithmetic.

* lower bound: an SRP base rate times ``2**(r-1) / (2**r - 1)``
* closed-form upper bound: ``min(Delta/K', 1/nu) * 2**(r-1) / (2**r - 1)``
* LP upper bound: reciprocal of ``min sum(mu)`` subject to
  ``mu_u + mu_v >= 2 - 2**(1-r)`` on every edge, ``mu >= 0``
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .graph import SimpleGraph, incidence_matrix, max_degree, maximum_matching
from .simplex import minimize

DEFAULT_LP_LIMIT = 64
DEFAULT_VERTEX_LIMIT = 6


class BoundsError(ValueError):
    pass


def multiplicity_factor(r: int) -> Fraction:
    if r < 1:
        raise BoundsError("r must be at least 1")
    return Fraction(2 ** (r - 1), 2 ** r - 1)


def pair_demand(r: int) -> Fraction:
    """Right-hand side ``2 - 2**(1-r)`` of every edge constraint."""
    return 1 / multiplicity_factor(r)


def lower_bound(base_rate, r: int) -> Fraction:
    return Fraction(base_rate) * multiplicity_factor(r)


def upper_closed(g: SimpleGraph, r: int) -> Fraction:
    if g.num_edges == 0:
        raise BoundsError("graph has no edges")
    nu = len(maximum_matching(g))
    return min(Fraction(max_degree(g), g.num_edges), Fraction(1, nu)) * multiplicity_factor(r)


@dataclass(frozen=True)
class LpSolution:
    optimum: Fraction
    mu: tuple[Fraction, ...]
    pivots: int


def solve_capacity_lp(g: SimpleGraph, r: int, limit: int = DEFAULT_LP_LIMIT) -> LpSolution:
    if g.num_vertices + g.num_edges > limit:
        raise BoundsError(f"LP size N+K'={g.num_vertices + g.num_edges} exceeds limit {limit}")
    if g.num_edges == 0:
        raise BoundsError("graph has no edges")
    inc = incidence_matrix(g)
    constraints = [list(col) for col in zip(*inc)]  # I(G)^T, one row per edge
    c = pair_demand(r)
    res = minimize([1] * g.num_vertices, constraints, [c] * g.num_edges, [">="] * g.num_edges)
    if res.status != "optimal":
        raise BoundsError(f"capacity LP unexpectedly {res.status}")
    return LpSolution(res.value, res.x, res.pivots)


def lp_upper(g: SimpleGraph, r: int, limit: int = DEFAULT_LP_LIMIT) -> Fraction:
    return 1 / solve_capacity_lp(g, r, limit).optimum


def _solve_square(rows: list[list[int]], rhs: list[int]) -> list[Fraction] | None:
    """Integer Bareiss elimination; None when singular."""
    n = len(rows)
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return None
        m[k], m[p] = m[p], m[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = Fraction(s) / m[i][i]
    return x


def vertex_optimum(g: SimpleGraph, r: int, limit: int = DEFAULT_VERTEX_LIMIT) -> Fraction:
    """LP optimum by brute force over basic feasible solutions.

    A vertex of ``{mu >= 0, I(G)^T mu >= c}`` makes N linearly independent
    constraints tight. Every N-subset of the K'+N constraints is solved and
    the feasible solutions are minimized over. Independent of the simplex.
    The feasible set scales with ``c``, so the search runs once at ``c = 1``.
    """
    if g.num_vertices > limit:
        raise BoundsError(f"vertex enumeration limited to {limit} vertices")
    return _unit_vertex_optimum(g) * pair_demand(r)


@lru_cache(maxsize=None)
def _unit_vertex_optimum(g: SimpleGraph) -> Fraction:
    n = g.num_vertices
    rows = [[1 if v in e else 0 for v in g.vertices] for e in g.edges]
    rhs = [1] * len(rows)
    for v in range(n):
        rows.append([1 if w == v else 0 for w in range(n)])
        rhs.append(0)
    best = None
    for pick in combinations(range(len(rows)), n):
        x = _solve_square([rows[i] for i in pick], [rhs[i] for i in pick])
        if x is None:
            continue
        if any(v < 0 for v in x):
            continue
        if any(x[u - 1] + x[w - 1] < 1 for u, w in g.edges):
            continue
        total = sum(x)
        if best is None or total < best:
            best = total
    if best is None:
        raise BoundsError("no basic feasible solution found")
    return best


def dual_v1(g: SimpleGraph) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, max_degree(g)) for _ in g.edges)


def dual_v2(g: SimpleGraph) -> tuple[Fraction, ...]:
    match = set(maximum_matching(g))
    return tuple(Fraction(1 if i in match else 0) for i in range(1, g.num_edges + 1))


def dual_feasible(g: SimpleGraph, eta: Sequence, r: int = 1) -> tuple[bool, Fraction]:
    """Check ``I(G) eta <= 1``, ``eta >= 0``; objective ``(2 - 2**(1-r)) sum(eta)``."""
    if len(eta) != g.num_edges:
        raise BoundsError(f"dual vector has length {len(eta)}, graph has {g.num_edges} edges")
    eta = [Fraction(x) for x in eta]
    ok = all(x >= 0 for x in eta) and all(
        sum(x for x, e in zip(eta, g.edges) if v in e) <= 1 for v in g.vertices)
    return ok, pair_demand(r) * sum(eta, Fraction(0))


@dataclass(frozen=True)
class CapacityReport:
    graph: str
    r: int
    lower: Fraction | None
    upper_closed: Fraction
    upper_lp: Fraction
    lp_optimum: Fraction
    tight: bool

    def to_json(self) -> dict:
        def q(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"
        return {"graph": self.graph, "r": self.r, "lower": q(self.lower),
                "upper_closed": q(self.upper_closed), "upper_lp": q(self.upper_lp),
                "lp_optimum": q(self.lp_optimum), "tight": self.tight}


def capacity_report(g: SimpleGraph, r: int, base_rate=None, name: str | None = None) -> CapacityReport:
    """Assemble every bound. ``base_rate`` must come from a certified SRP
    scheme; without it no tightness claim is made."""
    closed = upper_closed(g, r)
    sol = solve_capacity_lp(g, r)
    lp = 1 / sol.optimum
    lower = None if base_rate is None else lower_bound(base_rate, r)
    tight = lower is not None and lower == min(closed, lp)
    return CapacityReport(name or g.name or f"G(N={g.num_vertices})", r, lower, closed, lp, sol.optimum, tight)
