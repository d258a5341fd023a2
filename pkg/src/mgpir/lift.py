"""Lift a symmetric-retrieval base scheme on G to a scheme on G^(r).

Files have ``L = 2**(r-1) * L'`` bits, split into ``2**(r-1)`` blocks of
``L'`` logical bits. For every nonempty copy subset ``A`` (by size, then
lexicographically) the base scheme runs once on virtual files, one per edge,
each the XOR of copies ``A`` of that edge restricted to chosen blocks.

With desired file ``(i, d)`` and the proof's relabeling (swap ``d`` and 1),
the desired edge's virtual file for instance ``A`` is

* ``d in A``:  ``w_d|U(A-{d}) + sum_{t in A-{d}} w_t|U(A-{d,t})``
* ``d not in A``: ``sum_{t in A} w_t|U(A-{t})`` (interference for later)

where ``U(B)`` is the block numbered by :func:`assign_block`. Every other
edge reads block :func:`partner_blocks` ``[A]`` of each copy in ``A``. That
numbering identifies ``A`` with its complement, so a copy never meets the
same block twice. When ``d in A`` and ``|A| >= 2`` the base scheme runs
flipped so the two storing servers trade halves, keeping each server's
logical indices per file distinct across instances.

Logical indices pass through the private per-file permutations last.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Any, Sequence

from .graph import MultiGraph
from .model import (AnswerBitSpec, BitSelector, Bits, FileId, PermutationPack,
                    ServerQuery, all_files)


class LiftError(ValueError):
    pass


Subset = frozenset[int]


@lru_cache(maxsize=None)
def enumerate_instances(r: int) -> tuple[Subset, ...]:
    if r < 1:
        raise LiftError("r must be at least 1")
    return tuple(frozenset(c) for size in range(1, r + 1)
                 for c in combinations(range(1, r + 1), size))


def _swap(r: int, d: int) -> dict[int, int]:
    pi = {t: t for t in range(1, r + 1)}
    pi[d], pi[1] = 1, d
    return pi


def assign_block(r: int, desired_copy: int, subset) -> int:
    """Block number u_B for ``B`` not containing the desired copy.

    After relabeling ``B`` into ``[2:r]``, subsets of size ``k`` occupy the
    window starting at ``1 + sum_{s<k} C(r-1, s)``, in lexicographic order.
    """
    subset = frozenset(subset)
    if desired_copy in subset:
        raise LiftError(f"block subset {sorted(subset)} contains the desired copy {desired_copy}")
    if not subset <= set(range(1, r + 1)):
        raise LiftError(f"block subset {sorted(subset)} outside 1..{r}")
    pi = _swap(r, desired_copy)
    relabeled = tuple(sorted(pi[t] for t in subset))
    k = len(relabeled)
    offset = sum(comb(r - 1, s) for s in range(k))
    rank = list(combinations(range(2, r + 1), k)).index(relabeled)
    return offset + rank + 1


@lru_cache(maxsize=None)
def block_assignment(r: int, desired_copy: int) -> dict[Subset, int]:
    others = [t for t in range(1, r + 1) if t != desired_copy]
    return {frozenset(c): assign_block(r, desired_copy, c)
            for k in range(r) for c in combinations(others, k)}


def block_range(u: int, base_len: int) -> range:
    """Logical indices ``(u-1)L'+1 .. uL'``."""
    return range((u - 1) * base_len + 1, u * base_len + 1)


@lru_cache(maxsize=None)
def partner_blocks(r: int) -> dict[Subset, int]:
    """Block read by non-desired edges in each instance.

    ``A`` and its complement share a number, assigned in instance order.
    Each copy lies in exactly one member of every pair, so the
    ``2**(r-1)`` instances containing it see ``2**(r-1)`` distinct blocks.
    """
    full = frozenset(range(1, r + 1))
    out: dict[Subset, int] = {}
    for a in enumerate_instances(r):
        if a not in out:
            out[a] = len(set(out.values())) + 1
            if full - a:
                out[full - a] = out[a]
    return out


VirtualBit = frozenset[tuple[int, int]]  # (copy, logical index) pairs


@dataclass(frozen=True)
class StageInstance:
    stage: int
    subset: Subset
    virtual: dict[int, tuple[VirtualBit, ...]] = field(hash=False)
    flipped: bool
    base_plan: Any = field(hash=False)


@dataclass(frozen=True)
class RecoveryStep:
    """Desired block ``block`` = virtual file of ``instance`` XOR that of ``cancels``."""

    block: int
    instance: int
    cancels: int | None


@dataclass(frozen=True)
class LiftedPlan:
    theta: FileId
    permutations: PermutationPack = field(hash=False)
    instances: tuple[StageInstance, ...]
    queries: tuple[ServerQuery, ...]
    ledger: tuple[RecoveryStep, ...]
    file_len: int
    base: Any = field(hash=False, compare=False, repr=False)

    @property
    def download(self) -> int:
        return sum(len(q) for q in self.queries)


def _check_base(base):
    for attr in ("base_graph", "file_len", "base_plan", "base_decode"):
        if not hasattr(base, attr):
            raise LiftError(f"base scheme lacks {attr!r}; it must expose plans and decode ledgers")
    if base.file_len % 2:
        raise LiftError("base file length must be even for the symmetric split")


def _virtual_files(r: int, base_len: int, edges: int, theta: FileId, a: Subset):
    edge, d = theta.edge, theta.copy
    blocks = block_assignment(r, d)
    out = {}
    for e in range(1, edges + 1):
        if e == edge:
            if d in a:
                terms = [(d, blocks[a - {d}])] + [(t, blocks[a - {d, t}]) for t in sorted(a - {d})]
            else:
                terms = [(t, blocks[a - {t}]) for t in sorted(a)]
        else:
            m = partner_blocks(r)[a]
            terms = [(t, m) for t in sorted(a)]
        out[e] = tuple(frozenset((t, (u - 1) * base_len + p) for t, u in terms)
                       for p in range(1, base_len + 1))
    return out


def _expand(spec: AnswerBitSpec, virtual, perms: PermutationPack) -> AnswerBitSpec:
    acc: set[BitSelector] = set()
    for sel in spec.selectors:
        for t, k in virtual[sel.file.edge][sel.index - 1]:
            f = FileId(sel.file.edge, t)
            acc ^= {BitSelector(f, perms.physical(f, k))}
    return AnswerBitSpec(frozenset(acc))


def lift_plan(base, graph: MultiGraph, theta: FileId, perms: PermutationPack | None = None,
              flips: bool = True) -> LiftedPlan:
    """Plan for file ``theta`` of ``graph`` using ``base`` once per copy subset.

    ``flips=False`` disables the orientation flips (a privacy-breaking
    control, not a valid scheme).
    """
    _check_base(base)
    if graph.base != base.base_graph:
        raise LiftError("base scheme was built for a different graph")
    r, lb = graph.multiplicity, base.file_len
    length = 2 ** (r - 1) * lb
    if not (1 <= theta.edge <= graph.base.num_edges and 1 <= theta.copy <= r):
        raise LiftError(f"theta {theta} is not a file of the multigraph")
    if perms is None:
        perms = PermutationPack.identity(all_files(graph), length)
    instances = []
    per_server: list[list[AnswerBitSpec]] = [[] for _ in graph.base.vertices]
    for a in enumerate_instances(r):
        flipped = flips and theta.copy in a and len(a) >= 2
        virtual = _virtual_files(r, lb, graph.base.num_edges, theta, a)
        bp = base.base_plan(theta.edge, None, flipped)
        for q in bp.queries:
            per_server[q.server - 1].extend(_expand(spec, virtual, perms) for spec in q.bits)
        instances.append(StageInstance(len(a), a, virtual, flipped, bp))

    index = {inst.subset: n for n, inst in enumerate(instances)}
    d = theta.copy
    ledger = []
    for n, inst in enumerate(instances):
        if d in inst.subset:
            rest = inst.subset - {d}
            ledger.append(RecoveryStep(block_assignment(r, d)[rest], n, index.get(rest)))
    queries = tuple(ServerQuery(s, tuple(bits)) for s, bits in enumerate(per_server, start=1))
    return LiftedPlan(theta, perms, tuple(instances), queries, tuple(ledger), length, base)


def lift_decode(answers: Sequence[Bits], plan: LiftedPlan) -> Bits:
    base = plan.base
    if len(answers) != len(plan.queries):
        raise LiftError(f"expected {len(plan.queries)} answers, got {len(answers)}")
    for a, q in zip(answers, plan.queries):
        if len(a) != len(q):
            raise LiftError(f"server {q.server} answered {len(a)} bits, query asked {len(q)}")
    offsets = [0] * len(answers)
    virtual_bits = []
    for inst in plan.instances:
        chunk = []
        for s, q in enumerate(inst.base_plan.queries):
            width = len(q.bits)
            chunk.append(tuple(answers[s][offsets[s]:offsets[s] + width]))
            offsets[s] += width
        virtual_bits.append(base.base_decode(chunk, inst.base_plan)[0])

    lb = base.file_len
    logical = [0] * plan.file_len
    for step in plan.ledger:
        got = virtual_bits[step.instance]
        if step.cancels is not None:
            got = tuple(x ^ y for x, y in zip(got, virtual_bits[step.cancels]))
        for k, bit in zip(block_range(step.block, lb), got):
            logical[k - 1] = bit
    out = [0] * plan.file_len
    for k, bit in enumerate(logical, start=1):
        out[plan.permutations.physical(plan.theta, k) - 1] = bit
    return tuple(out)


def download_cost(r: int, base_download: int) -> int:
    if r < 1:
        raise LiftError("r must be at least 1")
    return sum(comb(r, size) for size in range(1, r + 1)) * base_download


def lifted_rate(base_rate: Fraction, r: int) -> Fraction:
    if r < 1:
        raise LiftError("r must be at least 1")
    return Fraction(base_rate) * Fraction(2 ** (r - 1), 2 ** r - 1)


class LiftedScheme:
    """Scheme on ``G^(r)`` built from a base scheme on ``G``."""

    def __init__(self, base, r: int, flips: bool = True):
        _check_base(base)
        if r < 1:
            raise LiftError("r must be at least 1")
        self.base = base
        self.r = r
        self.flips = flips
        self.graph = MultiGraph(base.base_graph, r)
        self.file_len = 2 ** (r - 1) * base.file_len

    def __repr__(self):
        flag = "" if self.flips else ", flips=False"
        return f"LiftedScheme({self.base!r}, r={self.r}{flag})"

    @property
    def download(self) -> int:
        return download_cost(self.r, self.base.download)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.file_len, self.download)

    def thetas(self) -> list[FileId]:
        return all_files(self.graph)

    def plan(self, theta: FileId, perms: PermutationPack | None = None) -> LiftedPlan:
        return lift_plan(self.base, self.graph, theta, perms, self.flips)

    def decode(self, answers, plan: LiftedPlan) -> Bits:
        return lift_decode(answers, plan)
