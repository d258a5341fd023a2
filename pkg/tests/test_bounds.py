from fractions import Fraction

import pytest
from hypothesis import given

from mgpir.bounds import (BoundsError, capacity_report, dual_feasible, dual_v1, dual_v2, lower_bound,
                          lp_upper, multiplicity_factor, pair_demand, solve_capacity_lp, upper_closed,
                          vertex_optimum)
from mgpir.graph import build_graph, complete_graph, cycle_graph, path_graph, star_graph

from strategies import graphs


def test_factors():
    assert [multiplicity_factor(r) for r in (1, 2, 3)] == [1, Fraction(2, 3), Fraction(4, 7)]
    assert pair_demand(3) == Fraction(7, 4)
    with pytest.raises(BoundsError):
        multiplicity_factor(0)


def test_known_optima():
    assert solve_capacity_lp(path_graph(3), 2).optimum == Fraction(3, 2)
    assert solve_capacity_lp(path_graph(4), 2).optimum == 3
    assert solve_capacity_lp(cycle_graph(5), 1).optimum == Fraction(5, 2)
    assert vertex_optimum(complete_graph(4), 3) == Fraction(7, 2)


def test_reports():
    rep = capacity_report(path_graph(4), 2, Fraction(1, 2))
    assert (rep.lower, rep.upper_closed, rep.upper_lp, rep.tight) == (Fraction(1, 3),) * 3 + (True,)
    rep = capacity_report(path_graph(3), 2, Fraction(2, 3))
    assert (rep.lower, rep.upper_closed, rep.upper_lp) == (Fraction(4, 9), Fraction(2, 3), Fraction(2, 3))
    assert not rep.tight
    rep = capacity_report(cycle_graph(4), 1, Fraction(2, 5))
    assert rep.lower == Fraction(2, 5) and min(rep.upper_closed, rep.upper_lp) == Fraction(1, 2)
    assert not rep.tight
    assert capacity_report(path_graph(3), 1).lower is None
    assert not capacity_report(path_graph(3), 1).tight
    assert rep.to_json()["lower"] == "2/5"


def test_star_bound_is_degree_term():
    g = star_graph(4)
    assert upper_closed(g, 1) == 1 == lp_upper(g, 1)


def test_limits():
    with pytest.raises(BoundsError):
        vertex_optimum(path_graph(7), 1)
    with pytest.raises(BoundsError):
        solve_capacity_lp(complete_graph(9), 1, limit=20)
    with pytest.raises(BoundsError):
        upper_closed(build_graph(2, []), 1)
    with pytest.raises(BoundsError):
        dual_feasible(path_graph(3), [1])


@given(graphs(max_n=6))
def test_lp_sandwich(g):
    for r in (1, 2):
        opt = solve_capacity_lp(g, r).optimum
        assert opt == vertex_optimum(g, r)
        for eta in (dual_v1(g), dual_v2(g)):
            ok, obj = dual_feasible(g, eta, r)
            assert ok and obj <= opt
        assert lp_upper(g, r) <= upper_closed(g, r)


@given(graphs(max_n=7))
def test_lp_solution_is_feasible(g):
    sol = solve_capacity_lp(g, 3)
    c = pair_demand(3)
    assert all(m >= 0 for m in sol.mu)
    assert all(sol.mu[u - 1] + sol.mu[v - 1] >= c for u, v in g.edges)
    assert sum(sol.mu) == sol.optimum
    # half-integrality of the vertex cover LP
    assert all((2 * m / c).denominator == 1 for m in sol.mu)


def test_infeasible_dual():
    ok, _ = dual_feasible(path_graph(3), [1, 1])
    assert not ok
    ok, _ = dual_feasible(path_graph(3), [-1, 0])
    assert not ok
