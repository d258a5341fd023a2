import json

import pytest
from hypothesis import given, strategies as st

from mgpir.graph import MultiGraph, path_graph, star_graph
from mgpir.model import (AnswerBitSpec, BitSelector, Database, FileId, PermutationPack, QueryError,
                         ServerQuery, all_files, canonical_query, evaluate_answer, random_database,
                         stored_files, transcript, transcript_json)

P3R2 = MultiGraph(path_graph(3), 2)


def sel(e, c, k):
    return BitSelector(FileId(e, c), k)


def test_file_ids_order_by_edge_then_copy():
    assert sorted([FileId(2, 1), FileId(1, 2), FileId(1, 1)]) == [FileId(1, 1), FileId(1, 2), FileId(2, 1)]
    assert all_files(P3R2) == [FileId(1, 1), FileId(1, 2), FileId(2, 1), FileId(2, 2)]
    assert stored_files(P3R2, 1) == [FileId(1, 1), FileId(1, 2)]


def test_answer_spec_validation():
    with pytest.raises(ValueError):
        AnswerBitSpec(frozenset())
    with pytest.raises(ValueError):
        AnswerBitSpec.of(sel(1, 1, 1), sel(1, 1, 1))
    spec = AnswerBitSpec.of(sel(2, 1, 1), sel(1, 1, 2))
    assert spec.files() == {FileId(1), FileId(2)}


def test_canonical_query_sorts_within_bits_only():
    q = ServerQuery(2, (AnswerBitSpec.of(sel(2, 1, 1), sel(1, 1, 2)), AnswerBitSpec.of(sel(1, 1, 1))))
    assert canonical_query(q) == (((1, 1, 2), (2, 1, 1)), ((1, 1, 1),))


def test_database_validation():
    files = all_files(P3R2)
    with pytest.raises(ValueError):
        Database(P3R2, 2, {f: (0, 1) for f in files[:-1]})
    with pytest.raises(ValueError):
        Database(P3R2, 2, {f: (0, 2) for f in files})


def test_evaluate_rejects_unstored_and_out_of_range():
    db = random_database(P3R2, 4, 0)
    with pytest.raises(QueryError, match="does not store"):
        evaluate_answer(ServerQuery(1, (AnswerBitSpec.of(sel(2, 1, 1)),)), db)
    with pytest.raises(QueryError, match="outside"):
        evaluate_answer(ServerQuery(1, (AnswerBitSpec.of(sel(1, 1, 5)),)), db)


def test_random_database_is_seeded():
    assert random_database(P3R2, 4, 9).contents == random_database(P3R2, 4, 9).contents
    assert random_database(P3R2, 4, 9).contents != random_database(P3R2, 4, 10).contents


@st.composite
def query_and_dbs(draw):
    g = MultiGraph(star_graph(draw(st.integers(1, 3))), draw(st.integers(1, 2)))
    length = draw(st.integers(1, 4))
    server = draw(st.sampled_from(list(g.base.vertices)))
    pool = [BitSelector(f, k) for f in stored_files(g, server) for k in range(1, length + 1)]
    bits = draw(st.lists(st.lists(st.sampled_from(pool), min_size=1, unique=True), min_size=1, max_size=4))
    q = ServerQuery(server, tuple(AnswerBitSpec(frozenset(b)) for b in bits))
    seeds = draw(st.tuples(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32)))
    return q, random_database(g, length, seeds[0]), random_database(g, length, seeds[1])


@given(query_and_dbs())
def test_answers_are_linear_over_gf2(case):
    q, d1, d2 = case
    a1, a2, a12 = evaluate_answer(q, d1), evaluate_answer(q, d2), evaluate_answer(q, d1 ^ d2)
    assert a12 == tuple(x ^ y for x, y in zip(a1, a2))


def test_permutation_pack():
    files = all_files(P3R2)
    ident = PermutationPack.identity(files, 4)
    assert ident.physical(FileId(2, 2), 3) == 3
    with pytest.raises(ValueError):
        PermutationPack({FileId(1): (1, 1)})
    a, b = PermutationPack.random(files, 4, 3), PermutationPack.random(files, 4, 3)
    assert a == b
    assert all(sorted(p) == [1, 2, 3, 4] for p in a.values())


@given(st.integers(1, 8), st.integers(0, 2 ** 32))
def test_random_pack_is_a_permutation(length, seed):
    pack = PermutationPack.random([FileId(1), FileId(2)], length, seed)
    assert all(sorted(p) == list(range(1, length + 1)) for p in pack.values())


def test_transcript_shape():
    q = ServerQuery(1, (AnswerBitSpec.of(sel(1, 2, 3)),))
    doc = transcript(FileId(1, 2), [q], [(1,)])
    assert doc == {"theta": [1, 2], "per-server": [
        {"server": 1, "bits": [[{"edge": 1, "copy": 2, "index": 3}]], "answer": "1"}]}
    assert json.loads(transcript_json(FileId(1, 2), [q])) == {
        "theta": [1, 2], "per-server": [{"server": 1, "bits": doc["per-server"][0]["bits"]}]}
