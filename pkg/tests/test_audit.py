from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mgpir import audit
from mgpir.controls import CorruptedPathScheme, SkewedPathScheme, unflipped_lift
from mgpir.lift import LiftedScheme
from mgpir.model import FileId, PermutationPack, all_files
from mgpir.path_scheme import PathScheme

from oracles import brute_rank

P3 = PathScheme(3)
P3R2 = LiftedScheme(PathScheme(3), 2)


@given(st.lists(st.integers(0, 255), max_size=7))
def test_gf2_rank_against_span_size(rows):
    assert audit.gf2_rank(list(rows)) == brute_rank(rows)


def test_total_variation():
    p = {"x": Fraction(1, 2), "y": Fraction(1, 2)}
    q = {"x": Fraction(1, 4), "z": Fraction(3, 4)}
    assert audit.total_variation(p, q) == Fraction(3, 4)
    assert audit.total_variation(p, p) == 0


@pytest.mark.parametrize("scheme,theta,server", [
    (P3, FileId(1), 2),
    (P3R2, FileId(1, 1), 1),
    (P3R2, FileId(2, 2), 3),
])
def test_reduced_enumeration_equals_full(scheme, theta, server):
    q = audit.logical_queries(scheme, theta)[server - 1]
    reduced = audit.view_distribution(q, scheme.file_len)
    full = audit.view_distribution(q, scheme.file_len, full=True)
    assert reduced == full
    assert sum(reduced.values()) == 1


def test_exhaustive_privacy_values():
    rep = audit.check_privacy(P3R2)
    assert rep.passed and rep.statistic == 0 and rep.counterexample is None
    assert rep.to_json()["statistic"] == "0/1"
    bad = audit.check_privacy(unflipped_lift(PathScheme(3), 2))
    assert not bad.passed
    assert bad.statistic == 1
    assert bad.counterexample["server"] == 1


def test_budget_is_enforced():
    with pytest.raises(audit.BudgetExceeded):
        audit.check_privacy(LiftedScheme(PathScheme(4), 3), mode="exhaustive", budget=10_000)
    with pytest.raises(audit.BudgetExceeded):
        audit.check_reliability(P3R2, exhaustive=True)
    with pytest.raises(ValueError):
        audit.check_privacy(P3, mode="psychic")


def test_sampled_privacy_on_p4_r3():
    rep = audit.check_privacy(LiftedScheme(PathScheme(4), 3), mode="sampled")
    assert rep.passed, rep.details
    assert 0 <= rep.statistic < audit.DEFAULT_EPSILON


def test_sampled_privacy_flags_unflipped():
    rep = audit.check_privacy(unflipped_lift(PathScheme(3), 2), mode="sampled", samples=5_000)
    assert not rep.passed
    assert rep.counterexample["server"] == 1


class IgnoresPerms(PathScheme):
    def plan(self, theta, perms):
        return self.base_plan(theta.edge)


def test_factorization_is_checked():
    with pytest.raises(ValueError, match="last step"):
        audit.check_privacy(IgnoresPerms(3))


def test_reliability():
    assert audit.check_reliability(P3, exhaustive=True).details["retrievals"] == 128
    assert audit.check_reliability(P3, exhaustive=True).passed
    bad = audit.check_reliability(CorruptedPathScheme(3), exhaustive=True)
    assert not bad.passed and bad.statistic == 64
    assert bad.counterexample["expected"] != bad.counterexample["decoded"]
    assert audit.check_reliability(P3R2, trials=10, seed=4).passed


def test_srp():
    cert = audit.check_srp(PathScheme(5))
    assert cert.passed and all(e["counts"] == [1, 1] for e in cert.entries)
    coin = PermutationPack({FileId(1): (2, 1), FileId(2): (1, 2)})
    assert audit.check_srp(P3, coins=[coin]).passed
    skewed = audit.check_srp(SkewedPathScheme(3))
    assert not skewed.passed
    assert skewed.to_json()["verdict"] == "FAIL"


def test_answer_ranks_are_exactly_tight():
    assert audit.rank_requirement(3, 8) == 14
    for scheme in (P3, P3R2, LiftedScheme(PathScheme(4), 3)):
        rep = audit.check_answer_ranks(scheme)
        assert rep.passed and rep.statistic == 0
        assert rep.details["deficient_servers"] == []


def test_answer_entropy_of_path_servers():
    for s in (1, 2, 3):
        assert audit.answer_entropy_lower(P3, s, FileId(1)) == 1
    packs = [PermutationPack.identity(all_files(P3R2.graph), 4)]
    assert audit.answer_entropy_lower(P3R2, 2, FileId(1, 1), randomness=packs) == 3
