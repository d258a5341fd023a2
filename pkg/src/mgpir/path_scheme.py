"""The two-bit XOR-chain scheme on the path P_N.

Files are ``W_1..W_{N-1}`` with ``W_i`` on servers ``S_i`` and ``S_{i+1}``.
Each file has two bits; the private coin permutes them. To fetch ``W_theta``
every server left of the cut (``S_1..S_theta``) returns the XOR of logical
bit 1 of its incident files and every server right of the cut returns the
XOR of logical bit 2. XOR-chaining each side isolates one bit of
``W_theta``, so ``S_theta`` and ``S_{theta+1}`` each deliver exactly one.

``flipped`` swaps the roles of logical bits 1 and 2 everywhere, which moves
the first half of the desired file to ``S_{theta+1}``.

Base-scheme contract used by :mod:`mgpir.lift`:

* ``base_graph``, ``file_len`` (L'), ``download`` (D')
* ``base_plan(edge, coin=None, flipped=False)`` -> plan with ``.queries``
  over ``FileId(edge, 1)``; ``coin=None`` means identity
* ``base_decode(answers, plan)`` -> ``(bits, ledger)`` where ``bits[p-1]`` is
  position ``p`` of the desired file and the ledger names the delivering
  server of every bit. Standard orientation delivers positions
  ``1..L'/2`` from the edge's first endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .graph import MultiGraph, path_graph
from .model import AnswerBitSpec, BitSelector, Bits, FileId, PermutationPack, ServerQuery

BASE_LEN = 2


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class LedgerEntry:
    """One recovered desired bit: where it sits, who delivered it, which answer
    bits (server, 1-based position) were XORed to get it."""

    logical: int
    position: int
    server: int
    sources: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class BasePlan:
    n: int
    theta: int
    coin: PermutationPack
    flipped: bool
    queries: tuple[ServerQuery, ...]


def _coin_or_identity(n: int, coin) -> PermutationPack:
    if coin is None:
        return PermutationPack.identity([FileId(i) for i in range(1, n)], BASE_LEN)
    return coin


def path_plan(n: int, theta: int, coin: PermutationPack | None = None, flipped: bool = False) -> BasePlan:
    if n < 2:
        raise PlanError("path scheme needs N >= 2")
    if not 1 <= theta <= n - 1:
        raise PlanError(f"theta={theta} outside 1..{n - 1}")
    coin = _coin_or_identity(n, coin)
    lo, hi = (2, 1) if flipped else (1, 2)
    queries = []
    for s in range(1, n + 1):
        label = lo if s <= theta else hi
        incident = [e for e in (s - 1, s) if 1 <= e <= n - 1]
        spec = AnswerBitSpec.of(*(BitSelector(FileId(e), coin.physical(FileId(e), label))
                                  for e in incident))
        queries.append(ServerQuery(s, (spec,)))
    return BasePlan(n, theta, coin, flipped, tuple(queries))


def _chain(answers: Sequence[Bits], servers: range) -> int:
    acc = 0
    for s in servers:
        acc ^= answers[s - 1][0]
    return acc


def _delivering(plan: BasePlan, servers: range) -> int:
    target = FileId(plan.theta)
    for s in servers:
        if any(target in spec.files() for spec in plan.queries[s - 1].bits):
            return s
    raise PlanError("no server in the chain touches the desired file")


def path_decode(answers: Sequence[Bits], plan: BasePlan) -> tuple[Bits, tuple[LedgerEntry, ...]]:
    n, theta = plan.n, plan.theta
    if len(answers) != n:
        raise PlanError(f"expected answers from {n} servers, got {len(answers)}")
    for s, (a, q) in enumerate(zip(answers, plan.queries), start=1):
        if len(a) != len(q.bits):
            raise PlanError(f"server {s} answered {len(a)} bits, query asked {len(q.bits)}")
    lo, hi = (2, 1) if plan.flipped else (1, 2)
    left, right = range(1, theta + 1), range(theta + 1, n + 1)
    target = FileId(theta)
    bits = [0] * BASE_LEN
    ledger = []
    for label, side in ((lo, left), (hi, right)):
        pos = plan.coin.physical(target, label)
        bits[pos - 1] = _chain(answers, side)
        ledger.append(LedgerEntry(label, pos, _delivering(plan, side), tuple((s, 1) for s in side)))
    ledger.sort(key=lambda e: e.logical)
    return tuple(bits), tuple(ledger)


def path_rate(n: int) -> Fraction:
    if n < 2:
        raise PlanError("path scheme needs N >= 2")
    return Fraction(BASE_LEN, n)


class PathScheme:
    """Path scheme packaged both as a base scheme and as a scheme on P_N^(1)."""

    file_len = BASE_LEN

    def __init__(self, n: int):
        if n < 2:
            raise PlanError("path scheme needs N >= 2")
        self.n = n
        self.base_graph = path_graph(n)
        self.graph = MultiGraph(self.base_graph, 1)

    def __repr__(self):
        return f"{type(self).__name__}({self.n})"

    @property
    def download(self) -> int:
        return self.n

    @property
    def rate(self) -> Fraction:
        return path_rate(self.n)

    def files(self) -> list[FileId]:
        return [FileId(i) for i in range(1, self.n)]

    def thetas(self) -> list[FileId]:
        return self.files()

    def coins(self) -> Iterator[PermutationPack]:
        """Every coin: each file's two bits swapped or not."""
        files = self.files()
        for swaps in product((False, True), repeat=len(files)):
            yield PermutationPack({f: (2, 1) if s else (1, 2) for f, s in zip(files, swaps)})

    def base_plan(self, theta: int, coin=None, flipped: bool = False) -> BasePlan:
        return path_plan(self.n, theta, coin, flipped)

    def base_decode(self, answers, plan):
        return path_decode(answers, plan)

    # generic scheme contract (theta as FileId, randomness as PermutationPack)
    def plan(self, theta: FileId, perms: PermutationPack) -> BasePlan:
        if theta.copy != 1:
            raise PlanError("the path scheme stores a single copy per edge")
        return self.base_plan(theta.edge, perms)

    def decode(self, answers, plan) -> Bits:
        return self.base_decode(answers, plan)[0]
