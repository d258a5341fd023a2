"""Files, databases, XOR query specifications and answer evaluation.

A server answer bit is the XOR of an explicit set of stored bits, so a query is
fully observable: the privacy auditor compares exactly these selector sets.

Bit vectors are tuples of 0/1 ints; position ``k`` (1-based) is element ``k-1``,
serialized most-significant-first as a ``"0101"`` string in index order.

Randomness comes from ``numpy.random.default_rng`` (PCG64). Seeds are
reproducible within this package only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .graph import MultiGraph

Bits = tuple[int, ...]


class QueryError(ValueError):
    """A query that the addressed server cannot answer."""


@dataclass(frozen=True, order=True)
class FileId:
    edge: int
    copy: int = 1

    def __str__(self):
        return f"W{self.edge},{self.copy}"


@dataclass(frozen=True, order=True)
class BitSelector:
    file: FileId
    index: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.file.edge, self.file.copy, self.index)


@dataclass(frozen=True)
class AnswerBitSpec:
    selectors: frozenset[BitSelector]

    def __post_init__(self):
        if not self.selectors:
            raise QueryError("an answer bit must select at least one stored bit")

    @classmethod
    def of(cls, *selectors: BitSelector) -> "AnswerBitSpec":
        sels = frozenset(selectors)
        if len(sels) != len(selectors):
            raise QueryError("duplicate selector in answer bit")
        return cls(sels)

    def files(self) -> frozenset[FileId]:
        return frozenset(s.file for s in self.selectors)


@dataclass(frozen=True)
class ServerQuery:
    server: int
    bits: tuple[AnswerBitSpec, ...]

    def __len__(self):
        return len(self.bits)

    def selectors(self) -> Iterator[BitSelector]:
        for spec in self.bits:
            yield from spec.selectors


CanonicalQuery = tuple[tuple[tuple[int, int, int], ...], ...]


def canonical_query(query: ServerQuery) -> CanonicalQuery:
    """Spec order kept, selectors inside each spec sorted by (edge, copy, index)."""
    return tuple(tuple(sorted(s.key for s in spec.selectors)) for spec in query.bits)


def all_files(graph: MultiGraph) -> list[FileId]:
    return [FileId(i, j) for i in range(1, graph.base.num_edges + 1)
            for j in range(1, graph.multiplicity + 1)]


def stored_files(graph: MultiGraph, server: int) -> list[FileId]:
    return [FileId(i, j) for i in graph.base.incident_edges(server)
            for j in range(1, graph.multiplicity + 1)]


@dataclass(frozen=True)
class Database:
    graph: MultiGraph
    file_len: int
    contents: Mapping[FileId, Bits] = field(hash=False)

    def __post_init__(self):
        expected = set(all_files(self.graph))
        if set(self.contents) != expected:
            raise ValueError("database must hold exactly the files of its graph")
        for f, bits in self.contents.items():
            if len(bits) != self.file_len or any(b not in (0, 1) for b in bits):
                raise ValueError(f"{f} is not a {self.file_len}-bit vector")

    def __getitem__(self, f: FileId) -> Bits:
        return self.contents[f]

    def bit(self, sel: BitSelector) -> int:
        return self.contents[sel.file][sel.index - 1]

    def __xor__(self, other: "Database") -> "Database":
        if other.graph != self.graph or other.file_len != self.file_len:
            raise ValueError("databases over different graphs")
        return Database(self.graph, self.file_len, {
            f: tuple(a ^ b for a, b in zip(bits, other.contents[f]))
            for f, bits in self.contents.items()
        })


def random_database(graph: MultiGraph, file_len: int, seed) -> Database:
    if file_len < 1:
        raise ValueError("file_len must be at least 1")
    rng = np.random.default_rng(seed)
    files = all_files(graph)
    raw = rng.integers(0, 2, size=(len(files), file_len))
    return Database(graph, file_len, {f: tuple(int(b) for b in row) for f, row in zip(files, raw)})


def evaluate_answer(query: ServerQuery, db: Database) -> Bits:
    out = []
    for spec in query.bits:
        acc = 0
        for sel in spec.selectors:
            if not db.graph.stores(query.server, sel.file.edge):
                raise QueryError(f"server {query.server} does not store {sel.file}")
            if not 1 <= sel.index <= db.file_len:
                raise QueryError(f"index {sel.index} outside file length {db.file_len}")
            acc ^= db.bit(sel)
        out.append(acc)
    return tuple(out)


def evaluate_all(queries: Sequence[ServerQuery], db: Database) -> list[Bits]:
    return [evaluate_answer(q, db) for q in queries]


class PermutationPack(dict):
    """FileId -> permutation of 1..L, stored as a tuple: ``perm[k-1]`` is the
    physical position of logical bit ``k``."""

    def __init__(self, mapping: Mapping[FileId, Sequence[int]] = ()):
        super().__init__()
        for f, perm in dict(mapping).items():
            perm = tuple(int(p) for p in perm)
            if sorted(perm) != list(range(1, len(perm) + 1)):
                raise ValueError(f"{f}: {perm} is not a permutation")
            self[f] = perm

    def physical(self, f: FileId, logical: int) -> int:
        return self[f][logical - 1]

    @classmethod
    def identity(cls, files: Iterable[FileId], length: int) -> "PermutationPack":
        return cls({f: tuple(range(1, length + 1)) for f in files})

    @classmethod
    def random(cls, files: Iterable[FileId], length: int, rng) -> "PermutationPack":
        rng = np.random.default_rng(rng)
        return cls({f: tuple(int(x) + 1 for x in rng.permutation(length)) for f in files})


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def transcript(theta, queries: Sequence[ServerQuery], answers: Sequence[Bits] | None = None) -> dict:
    """JSON-ready record: ``{theta, per-server: [{server, bits, answer}]}``."""
    if isinstance(theta, FileId):
        theta = [theta.edge, theta.copy]
    rows = []
    for pos, q in enumerate(queries):
        row = {
            "server": q.server,
            "bits": [[{"edge": e, "copy": c, "index": k} for e, c, k in spec]
                     for spec in canonical_query(q)],
        }
        if answers is not None:
            row["answer"] = bits_to_str(answers[pos])
        rows.append(row)
    return {"theta": theta, "per-server": rows}


def transcript_json(theta, queries, answers=None) -> str:
    return json.dumps(transcript(theta, queries, answers), indent=2)
