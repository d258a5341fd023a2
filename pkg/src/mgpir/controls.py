"""Deliberately broken schemes. The auditors must reject each of them."""

from __future__ import annotations

from .lift import LiftedScheme
from .model import AnswerBitSpec, BitSelector, FileId, ServerQuery
from .path_scheme import BasePlan, LedgerEntry, PathScheme, path_plan


class SkewedPathScheme(PathScheme):
    """``S_theta`` also sends the second desired bit outright, so it delivers
    both bits and ``S_{theta+1}`` delivers none. Still reliable."""

    def base_plan(self, theta, coin=None, flipped=False):
        plan = path_plan(self.n, theta, coin, flipped)
        hi = 1 if flipped else 2
        extra = AnswerBitSpec.of(BitSelector(FileId(theta), plan.coin.physical(FileId(theta), hi)))
        queries = list(plan.queries)
        q = queries[theta - 1]
        queries[theta - 1] = ServerQuery(q.server, q.bits + (extra,))
        return BasePlan(plan.n, theta, plan.coin, flipped, tuple(queries))

    def base_decode(self, answers, plan):
        lo, hi = (2, 1) if plan.flipped else (1, 2)
        theta = plan.theta
        target = FileId(theta)
        left = 0
        for s in range(1, theta + 1):
            left ^= answers[s - 1][0]
        bits = [0, 0]
        bits[plan.coin.physical(target, lo) - 1] = left
        bits[plan.coin.physical(target, hi) - 1] = answers[theta - 1][1]
        ledger = (
            LedgerEntry(lo, plan.coin.physical(target, lo), theta, tuple((s, 1) for s in range(1, theta + 1))),
            LedgerEntry(hi, plan.coin.physical(target, hi), theta, ((theta, 2),)),
        )
        return tuple(bits), tuple(sorted(ledger, key=lambda e: e.logical))


class CorruptedPathScheme(PathScheme):
    """``S_1`` reads the wrong logical bit of ``W_1``; decoding breaks."""

    def base_plan(self, theta, coin=None, flipped=False):
        plan = path_plan(self.n, theta, coin, flipped)
        hi = 1 if flipped else 2
        bad = AnswerBitSpec.of(BitSelector(FileId(1), plan.coin.physical(FileId(1), hi)))
        queries = (ServerQuery(1, (bad,)),) + plan.queries[1:]
        return BasePlan(plan.n, theta, plan.coin, flipped, queries)


def unflipped_lift(base, r: int) -> LiftedScheme:
    """The lift with every orientation flip disabled."""
    return LiftedScheme(base, r, flips=False)


VARIANTS = {
    "unflipped": "lift without orientation flips (privacy must fail)",
    "skewed": "path scheme delivering both bits from one server (SRP must fail)",
    "corrupt": "path scheme with a wrong selector (reliability must fail)",
}
