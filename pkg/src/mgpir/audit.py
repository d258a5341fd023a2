"""Machine checks for reliability, privacy, symmetric retrieval and answer rank.

Schemes are duck-typed: ``graph`` (MultiGraph), ``file_len``, ``thetas()``,
``plan(theta, perms)`` returning an object with ``.queries`` (one
:class:`ServerQuery` per server, in server order) and ``decode(answers, plan)``.

Privacy relies on every scheme here addressing *logical* bit indices that the
per-file permutations map to physical indices as the final step. A server's
view therefore depends only on the permutations of the files it stores, and
for those only on the images of the logical indices it actually touches.
The auditor checks that factorization on a few random packs before using it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Any, Iterable

import numpy as np

from .model import (AnswerBitSpec, BitSelector, CanonicalQuery, Database, FileId, PermutationPack,
                    ServerQuery, all_files, canonical_query, evaluate_all,
                    random_database, transcript)

DEFAULT_BUDGET = 2_000_000
DEFAULT_SAMPLES = 100_000
DEFAULT_EPSILON = 0.01


class BudgetExceeded(RuntimeError):
    pass


def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _jsonable(value):
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, FileId):
        return [value.edge, value.copy]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


@dataclass
class AuditReport:
    property: str
    mode: str
    passed: bool
    statistic: Any
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "mode": self.mode,
            "verdict": self.verdict,
            "statistic": _jsonable(self.statistic),
            "details": _jsonable(self.details),
            "counterexample": _jsonable(self.counterexample),
        }


# -- reliability -------------------------------------------------------------

def _retrieve(scheme, theta, db: Database, perms: PermutationPack):
    plan = scheme.plan(theta, perms)
    answers = evaluate_all(plan.queries, db)
    return plan, answers, tuple(scheme.decode(answers, plan))


def check_reliability(scheme, trials: int = 100, seed=0, exhaustive: bool = False,
                      budget: int = DEFAULT_BUDGET) -> AuditReport:
    """Decode every theta against fresh random databases and coins.

    ``exhaustive=True`` instead walks every database and every permutation
    pack, refusing when that exceeds ``budget`` retrievals per theta.
    """
    graph, length = scheme.graph, scheme.file_len
    files = all_files(graph)
    if exhaustive:
        count = 2 ** (len(files) * length) * math.factorial(length) ** len(files)
        if count > budget:
            raise BudgetExceeded(f"{count} retrievals per theta exceeds budget {budget}")
        perm_packs = [PermutationPack(dict(zip(files, combo))) for combo in
                      product(list(permutations(range(1, length + 1))), repeat=len(files))]

        def cases():
            for raw in product((0, 1), repeat=len(files) * length):
                contents = {f: raw[n * length:(n + 1) * length] for n, f in enumerate(files)}
                db = Database(graph, length, contents)
                for pack in perm_packs:
                    yield db, pack
    else:
        rng = np.random.default_rng(seed)

        def cases():
            for _ in range(trials):
                db = random_database(graph, length, int(rng.integers(2 ** 63)))
                yield db, PermutationPack.random(files, length, rng)

    failures = 0
    checked = 0
    counterexample = None
    for theta in scheme.thetas():
        for db, perms in cases():
            plan, answers, got = _retrieve(scheme, theta, db, perms)
            checked += 1
            if got != tuple(db[theta]):
                failures += 1
                if counterexample is None:
                    counterexample = {
                        "theta": theta,
                        "expected": "".join(map(str, db[theta])),
                        "decoded": "".join(map(str, got)),
                        "transcript": transcript(theta, plan.queries, answers),
                    }
    return AuditReport("reliability", "exhaustive" if exhaustive else "sampled",
                       failures == 0, failures,
                       {"retrievals": checked, "thetas": len(scheme.thetas())},
                       counterexample)


# -- privacy -----------------------------------------------------------------

def apply_permutations(query: ServerQuery, perms: PermutationPack) -> ServerQuery:
    return ServerQuery(query.server, tuple(
        AnswerBitSpec(frozenset(BitSelector(s.file, perms.physical(s.file, s.index))
                                for s in spec.selectors))
        for spec in query.bits))


def logical_queries(scheme, theta) -> tuple[ServerQuery, ...]:
    files = all_files(scheme.graph)
    return tuple(scheme.plan(theta, PermutationPack.identity(files, scheme.file_len)).queries)


def _check_factorization(scheme, logical: dict, seed, rounds: int = 3):
    rng = np.random.default_rng(seed)
    files = all_files(scheme.graph)
    for theta, queries in logical.items():
        for _ in range(rounds):
            perms = PermutationPack.random(files, scheme.file_len, rng)
            real = scheme.plan(theta, perms).queries
            if [canonical_query(q) for q in real] != \
                    [canonical_query(apply_permutations(q, perms)) for q in queries]:
                raise ValueError(f"{scheme!r} does not apply bit permutations as its last step")


def _structure(query: ServerQuery):
    """What survives every permutation: per answer bit, the sorted files it touches."""
    return tuple(tuple(sorted((s.file.edge, s.file.copy) for s in spec.selectors))
                 for spec in query.bits)


def view_distribution(query: ServerQuery, file_len: int, full: bool = False,
                      budget: int = DEFAULT_BUDGET) -> dict[CanonicalQuery, Fraction]:
    """Exact distribution of the server's canonical query over its files' permutations.

    By default a file's permutation is enumerated only through the images of
    the logical indices the query touches. Each injective image tuple stands
    for ``(L-m)!`` full permutations, so all tuples are equally likely and the
    result equals the full enumeration, which ``full=True`` performs.
    """
    occ = [(b, s.file, s.index) for b, spec in enumerate(query.bits) for s in spec.selectors]
    files = sorted({f for _, f, _ in occ})
    used = {f: sorted({k for _, g, k in occ if g == f}) for f in files}
    if full:
        used = {f: list(range(1, file_len + 1)) for f in files}
    per_file = [list(permutations(range(1, file_len + 1), len(used[f]))) for f in files]
    states = math.prod(len(c) for c in per_file)
    if states > budget:
        raise BudgetExceeded(f"server {query.server}: {states} states exceeds budget {budget}")
    slot = {f: n for n, f in enumerate(files)}
    where = {f: {k: n for n, k in enumerate(used[f])} for f in files}
    layout = [[(s.file.edge, s.file.copy, slot[s.file], where[s.file][s.index])
               for s in spec.selectors] for spec in query.bits]
    counts: Counter = Counter()
    for combo in product(*per_file):
        counts[tuple(tuple(sorted((e, c, combo[fi][ki]) for e, c, fi, ki in bit))
                     for bit in layout)] += 1
    return {q: Fraction(n, states) for q, n in counts.items()}


def total_variation(p: dict, q: dict) -> Fraction:
    keys = set(p) | set(q)
    return sum((abs(Fraction(p.get(k, 0)) - Fraction(q.get(k, 0))) for k in keys), Fraction(0)) / 2


def _witness(p: dict, q: dict):
    for k in sorted(set(p) | set(q)):
        if p.get(k, 0) != q.get(k, 0):
            return k
    return None


def _exhaustive_server(views: dict, file_len: int, full: bool, budget: int):
    dists = {}
    for theta, q in views.items():
        dists[theta] = view_distribution(q, file_len, full, budget)
    classes: list[tuple[Any, dict]] = []
    for theta, d in dists.items():
        if not any(d == rep for _, rep in classes):
            classes.append((theta, d))
    worst, pair = Fraction(0), None
    for (ta, da), (tb, db) in combinations(classes, 2):
        tv = total_variation(da, db)
        if tv > worst:
            worst, pair = tv, (ta, tb, _witness(da, db))
    return worst, pair


def _row_counts(bits: np.ndarray) -> dict:
    """Count equal rows of a boolean matrix; keys are tuples of 62-bit chunks.

    Chunk values are merged through ``np.unique`` ranks so nothing overflows,
    and the returned keys are comparable across calls.
    """
    n, width = bits.shape
    weights = 1 << np.arange(62, dtype=np.int64)
    chunks = [bits[:, k:k + 62].astype(np.int64) @ weights[:min(62, width - k)]
              for k in range(0, width, 62)]
    ids = np.zeros(n, dtype=np.int64)
    for chunk in chunks:
        _, rank = np.unique(chunk, return_inverse=True)
        _, ids = np.unique(ids * n + rank.reshape(-1), return_inverse=True)
        ids = ids.reshape(-1).astype(np.int64)
    _, first, counts = np.unique(ids, return_index=True, return_counts=True)
    return {tuple(int(c[i]) for c in chunks): int(k) for i, k in zip(first, counts)}


def _sampled_server(views: dict, file_len: int, samples: int, rng):
    """Largest distance of any theta's empirical feature distribution from the
    theta-pooled one. Features: the equality pattern among a file's touched
    physical indices, and the marginal of each touched physical index."""
    any_view = next(iter(views.values()))
    occ = [(b, s.file) for b, spec in enumerate(any_view.bits)
           for s in sorted(spec.selectors, key=lambda s: s.key)]
    files = sorted({f for _, f in occ})
    slot = {f: n for n, f in enumerate(files)}
    groups: dict = {}
    for n, (b, f) in enumerate(occ):
        groups.setdefault((b, f), []).append(n)
    pairs = [(i, j) for i, j in combinations(range(len(occ)), 2) if occ[i][1] == occ[j][1]]

    feats: dict = {}
    for theta, q in views.items():
        logical = [s.index for spec in q.bits for s in sorted(spec.selectors, key=lambda s: s.key)]
        base = np.tile(np.arange(1, file_len + 1), (samples, len(files), 1))
        perms = rng.permuted(base, axis=2)
        cols = np.array([slot[f] for _, f in occ])
        phys = perms[:, cols, np.array(logical) - 1]
        for idx in groups.values():
            if len(idx) > 1:
                phys[:, idx] = np.sort(phys[:, idx], axis=1)
        out = {}
        if pairs:
            eq = np.stack([phys[:, i] == phys[:, j] for i, j in pairs], axis=1)
            out["pattern"] = _row_counts(eq)
        for n in range(len(occ)):
            out[("marginal", n)] = dict(enumerate(np.bincount(phys[:, n], minlength=file_len + 1)))
        feats[theta] = out

    worst, where = 0.0, None
    for key in next(iter(feats.values())):
        pooled: Counter = Counter()
        for f in feats.values():
            pooled.update(f[key])
        total = samples * len(feats)
        for theta, f in feats.items():
            support = set(pooled) | set(f[key])
            tv = 0.5 * sum(abs(f[key].get(k, 0) / samples - pooled.get(k, 0) / total) for k in support)
            if tv > worst:
                worst, where = float(tv), (theta, "pooled", key if isinstance(key, str) else f"marginal[{key[1]}]")
    return worst, where


def check_privacy(scheme, mode: str = "exhaustive", samples: int = DEFAULT_SAMPLES,
                  epsilon: float = DEFAULT_EPSILON, budget: int = DEFAULT_BUDGET,
                  seed=0, full: bool = False) -> AuditReport:
    """Compare each server's query distribution across every theta.

    Answer-bit structure (length and touched files per bit) is compared
    first; a mismatch means disjoint supports and distance 1. Exhaustive mode
    then computes exact distributions and the exact worst pairwise total
    variation; sampled mode estimates it from ``samples`` draws per theta.
    """
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown privacy mode {mode!r}")
    thetas = scheme.thetas()
    logical = {t: logical_queries(scheme, t) for t in thetas}
    _check_factorization(scheme, logical, seed)
    rng = np.random.default_rng(seed)
    exact = mode == "exhaustive"
    worst = Fraction(0) if exact else 0.0
    per_server = {}
    counterexample = None
    for s in scheme.graph.base.vertices:
        views = {t: logical[t][s - 1] for t in thetas}
        shapes = {t: _structure(q) for t, q in views.items()}
        first = thetas[0]
        bad = next((t for t in thetas if shapes[t] != shapes[first]), None)
        if bad is not None:
            stat = Fraction(1) if exact else 1.0
            found = {"server": s, "thetas": [first, bad],
                     "lengths": [len(views[first]), len(views[bad])]}
        elif exact:
            stat, pair = _exhaustive_server(views, scheme.file_len, full, budget)
            found = pair and {"server": s, "thetas": list(pair[:2]), "witness": pair[2]}
        else:
            stat, pair = _sampled_server(views, scheme.file_len, samples, rng)
            found = None if stat < epsilon else {
                "server": s, "theta": pair[0], "against": pair[1], "feature": pair[2], "tv": stat}
        per_server[s] = stat
        worst = max(worst, stat)
        if found and counterexample is None:
            counterexample = found
    passed = worst == 0 if exact else worst < epsilon
    details = {"max_tv_per_server": per_server, "thetas": len(thetas)}
    if not exact:
        details.update(samples=samples, epsilon=epsilon)
    return AuditReport("privacy", mode, passed, worst, details, counterexample)


# -- symmetric retrieval -------------------------------------------------------

@dataclass
class SrpCertificate:
    entries: list[dict]
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {"property": "srp", "verdict": self.verdict, "entries": _jsonable(self.entries)}


def check_srp(base, coins: Iterable[PermutationPack] | None = None) -> SrpCertificate:
    """Count desired bits delivered by each storing server, per theta.

    Every coin (default: ``base.coins()`` when available, else identity) and
    both orientations are checked; a theta passes when the two counts agree
    each time.
    """
    g = base.base_graph
    coin_list = list(coins) if coins is not None else (
        list(base.coins()) if hasattr(base, "coins") else [None])
    entries = []
    ok = True
    for theta in range(1, g.num_edges + 1):
        ends = g.endpoints(theta)
        seen = set()
        for coin in coin_list:
            for flipped in (False, True):
                plan = base.base_plan(theta, coin, flipped)
                zero = [tuple(0 for _ in q.bits) for q in plan.queries]
                _, ledger = base.base_decode(zero, plan)
                counts = tuple(sum(1 for e in ledger if e.server == v) for v in ends)
                stray = len(ledger) - sum(counts)
                seen.add((counts, stray))
        good = len(seen) == 1 and all(c[0] == c[1] and st == 0 for c, st in seen)
        counts, stray = sorted(seen)[0]
        entries.append({"theta": theta, "servers": list(ends), "counts": list(counts),
                        "other_servers": stray, "passed": good})
        ok &= good
    return SrpCertificate(entries, ok)


# -- answer rank (entropy lower bound for linear answers) --------------------

def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of rows given as int bitmasks."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


def answer_rank(query: ServerQuery) -> int:
    cols: dict = {}
    rows = []
    for spec in query.bits:
        mask = 0
        for s in spec.selectors:
            mask ^= 1 << cols.setdefault(s.key, len(cols))
        rows.append(mask)
    return gf2_rank(rows)


def answer_entropy_lower(scheme, server: int, theta, randomness: Iterable[PermutationPack] | None = None,
                         seed=0, draws: int = 4) -> Fraction:
    """Mean GF(2) rank of the server's answer map, i.e. H(A) in bits for a
    uniform database, averaged over ``randomness`` (default: identity plus
    ``draws`` random packs)."""
    files = all_files(scheme.graph)
    if randomness is None:
        rng = np.random.default_rng(seed)
        randomness = [PermutationPack.identity(files, scheme.file_len)] + \
            [PermutationPack.random(files, scheme.file_len, rng) for _ in range(draws)]
    ranks = []
    for perms in randomness:
        query = scheme.plan(theta, perms).queries[server - 1]
        if not all(isinstance(spec.selectors, frozenset) for spec in query.bits):
            raise TypeError("answer rank needs XOR-linear answer specs")
        ranks.append(answer_rank(query))
    return Fraction(sum(ranks), len(ranks))


def rank_requirement(r: int, file_len: int) -> Fraction:
    return (2 - Fraction(1, 2 ** (r - 1))) * file_len


def check_answer_ranks(scheme, seed=0, draws: int = 2) -> AuditReport:
    """For every theta and adjacent pair, rank_i + rank_j >= (2 - 2^(1-r)) L."""
    g = scheme.graph.base
    need = rank_requirement(scheme.graph.multiplicity, scheme.file_len)
    slack = None
    deficient = []
    failure = None
    for theta in scheme.thetas():
        ranks = {v: answer_entropy_lower(scheme, v, theta, seed=seed, draws=draws) for v in g.vertices}
        lengths = {v: len(q) for v, q in zip(g.vertices, logical_queries(scheme, theta))}
        deficient += [{"theta": theta, "server": v, "rank": ranks[v], "length": lengths[v]}
                      for v in g.vertices if ranks[v] < lengths[v]]
        for u, v in g.edges:
            gap = ranks[u] + ranks[v] - need
            if slack is None or gap < slack:
                slack = gap
            if gap < 0 and failure is None:
                failure = {"theta": theta, "servers": [u, v], "ranks": [ranks[u], ranks[v]], "needed": need}
    return AuditReport("answer-rank", "exhaustive", failure is None, slack,
                       {"required_pair_sum": need, "deficient_servers": deficient}, failure)
