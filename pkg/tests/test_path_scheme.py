import pytest
from hypothesis import given, strategies as st

from mgpir.model import FileId, PermutationPack, canonical_query, evaluate_all, random_database
from mgpir.path_scheme import PathScheme, PlanError, path_decode, path_plan, path_rate

from oracles import linearly_decodable


def rows(plan):
    return [canonical_query(q) for q in plan.queries]


def test_p3_identity_rows():
    # w_1 = (a1, a2), w_2 = (b1, b2)
    assert rows(path_plan(3, 1)) == [(((1, 1, 1),),), (((1, 1, 2), (2, 1, 2)),), (((2, 1, 2),),)]
    assert rows(path_plan(3, 2)) == [(((1, 1, 1),),), (((1, 1, 1), (2, 1, 1)),), (((2, 1, 2),),)]


def test_flipped_swaps_logical_bits():
    assert rows(path_plan(3, 1, flipped=True)) == [(((1, 1, 2),),), (((1, 1, 1), (2, 1, 1)),), (((2, 1, 1),),)]


@st.composite
def cases(draw):
    n = draw(st.integers(2, 9))
    theta = draw(st.integers(1, n - 1))
    swaps = draw(st.lists(st.booleans(), min_size=n - 1, max_size=n - 1))
    coin = PermutationPack({FileId(i): (2, 1) if s else (1, 2) for i, s in enumerate(swaps, start=1)})
    return n, theta, coin, draw(st.booleans()), draw(st.integers(0, 2 ** 32))


@given(cases())
def test_decodes_and_ledger_is_symmetric(case):
    n, theta, coin, flipped, seed = case
    scheme = PathScheme(n)
    plan = path_plan(n, theta, coin, flipped)
    db = random_database(scheme.graph, 2, seed)
    bits, ledger = path_decode(evaluate_all(plan.queries, db), plan)
    assert bits == db[FileId(theta)]
    assert sorted(e.server for e in ledger) == [theta, theta + 1]
    assert {e.position for e in ledger} == {1, 2}
    first = next(e for e in ledger if e.logical == (2 if flipped else 1))
    assert first.server == theta


@given(cases())
def test_span_oracle(case):
    n, theta, coin, flipped, _ = case
    assert linearly_decodable(path_plan(n, theta, coin, flipped).queries, theta, 1, 2)


def test_every_server_sends_one_bit_touching_all_its_files():
    for n in range(2, 7):
        for theta in range(1, n):
            for q in path_plan(n, theta).queries:
                assert len(q) == 1
                assert {f.edge for f in q.bits[0].files()} == {e for e in (q.server - 1, q.server) if 1 <= e < n}


def test_rate_and_coins():
    assert path_rate(4) == PathScheme(4).rate == pytest.approx(0.5)
    assert PathScheme(5).download == 5
    assert len(list(PathScheme(5).coins())) == 16


def test_errors():
    with pytest.raises(PlanError):
        PathScheme(1)
    with pytest.raises(PlanError):
        path_plan(4, 4)
    with pytest.raises(PlanError):
        PathScheme(3).plan(FileId(1, 2), PermutationPack())
    plan = path_plan(3, 1)
    with pytest.raises(PlanError):
        path_decode([(0,), (0,)], plan)
    with pytest.raises(PlanError):
        path_decode([(0,), (0, 1), (0,)], plan)


def test_generic_contract_matches_base():
    s = PathScheme(4)
    perms = PermutationPack.random(s.files(), 2, 5)
    assert rows(s.plan(FileId(2), perms)) == rows(s.base_plan(2, perms))
