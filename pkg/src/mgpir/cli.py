"""Command-line front end: ``mgpir {table,simulate,audit,bounds}``.

Exit codes: 0 success, 1 an audit check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import audit
from .bounds import capacity_report
from .controls import CorruptedPathScheme, SkewedPathScheme
from .graph import GraphError, MultiGraph, family_graph, is_labeled_path, load_graph
from .lift import LiftedScheme
from .model import (FileId, PermutationPack, all_files, bits_to_str, canonical_query,
                    evaluate_all, random_database, transcript)
from .path_scheme import PathScheme

SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
PRIME = "′"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str
    r: int | None = None
    theta: str | None = None
    seed: int = 0
    identity_perms: bool = False
    mode: str = "exhaustive"
    trials: int = 100
    samples: int = audit.DEFAULT_SAMPLES
    epsilon: float = audit.DEFAULT_EPSILON
    variant: str | None = None
    base_rate: str | None = None
    json: bool = False
    out: str | None = None


def resolve_graph(cfg: RunConfig) -> MultiGraph:
    path = Path(cfg.graph)
    if path.exists():
        mg = load_graph(path)
    elif ":" in cfg.graph:
        mg = MultiGraph(family_graph(cfg.graph), 1)
    else:
        raise UsageError(f"graph file {cfg.graph!r} not found")
    if cfg.r is not None:
        if cfg.r < 1:
            raise UsageError("--r must be at least 1")
        mg = MultiGraph(mg.base, cfg.r)
    return mg


def parse_theta(text: str, mg: MultiGraph) -> FileId:
    parts = text.split(",")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad --theta {text!r}") from None
    if mg.multiplicity > 1 and len(nums) != 2:
        raise UsageError("--theta needs EDGE,COPY when r > 1")
    if mg.multiplicity == 1 and len(nums) != 1:
        raise UsageError("--theta takes a bare EDGE when r = 1")
    theta = FileId(nums[0], nums[1] if len(nums) == 2 else 1)
    if not (1 <= theta.edge <= mg.base.num_edges and 1 <= theta.copy <= mg.multiplicity):
        raise UsageError(f"--theta {text} is not a file of this graph")
    return theta


def build_scheme(mg: MultiGraph, variant: str | None = None):
    if not is_labeled_path(mg.base):
        raise UsageError("only path graphs (edge i = (i, i+1)) have a base scheme here")
    n = mg.num_vertices
    base = {None: PathScheme, "unflipped": PathScheme, "skewed": SkewedPathScheme,
            "corrupt": CorruptedPathScheme}[variant](n)
    if mg.multiplicity == 1 and variant != "unflipped":
        return base
    return LiftedScheme(base, mg.multiplicity, flips=variant != "unflipped")


def theta_label(theta: FileId, r: int) -> str:
    return f"θ={theta.edge}" if r == 1 else f"θ=({theta.edge},{theta.copy})"


def symbol(edge: int, copy: int, index: int) -> str:
    letter = chr(ord("a") + edge - 1) if edge <= 26 else f"w{edge}_"
    return letter + PRIME * (copy - 1) + str(index).translate(SUBSCRIPTS)


def render_term(spec) -> str:
    return "+".join(symbol(*key) for key in spec)


def render_table(mg: MultiGraph, scheme, thetas, perms) -> list[str]:
    lines = [" | ".join(f"S{s}".translate(SUBSCRIPTS) for s in mg.base.vertices)]
    for theta in thetas:
        plan = scheme.plan(theta, perms)
        cols = [canonical_query(q) for q in plan.queries]
        label = theta_label(theta, mg.multiplicity) + ": "
        depth = max(len(c) for c in cols)
        for k in range(depth):
            cells = [render_term(c[k]) if k < len(c) else "-" for c in cols]
            prefix = label if k == 0 else " " * len(label)
            lines.append(prefix + " | ".join(cells))
    return lines


def _perms(cfg: RunConfig, scheme):
    files = all_files(scheme.graph)
    if cfg.identity_perms:
        return PermutationPack.identity(files, scheme.file_len)
    return PermutationPack.random(files, scheme.file_len, cfg.seed)


def rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def human_rational(x: Fraction) -> str:
    return f"{x} ({float(x):.4f})"


def cmd_table(cfg: RunConfig) -> tuple[str, int]:
    mg = resolve_graph(cfg)
    scheme = build_scheme(mg, cfg.variant)
    thetas = [parse_theta(cfg.theta, mg)] if cfg.theta else scheme.thetas()
    perms = _perms(cfg, scheme)
    if cfg.json:
        rows = [transcript([t.edge, t.copy], scheme.plan(t, perms).queries) for t in thetas]
        return json.dumps(rows, indent=2), 0
    return "\n".join(render_table(mg, scheme, thetas, perms)), 0


def cmd_simulate(cfg: RunConfig) -> tuple[str, int]:
    mg = resolve_graph(cfg)
    scheme = build_scheme(mg, cfg.variant)
    if cfg.theta is None:
        raise UsageError("simulate needs --theta")
    theta = parse_theta(cfg.theta, mg)
    db = random_database(mg, scheme.file_len, cfg.seed)
    perms = _perms(cfg, scheme)
    plan = scheme.plan(theta, perms)
    answers = evaluate_all(plan.queries, db)
    decoded = tuple(scheme.decode(answers, plan))
    ok = decoded == tuple(db[theta])
    download = sum(len(a) for a in answers)
    rate = Fraction(scheme.file_len, download)
    if cfg.json:
        doc = {"graph": mg.base.name, "r": mg.multiplicity, "theta": [theta.edge, theta.copy],
               "seed": cfg.seed, "file_len": scheme.file_len, "download": download,
               "rate": rational(rate), "verdict": "OK" if ok else "FAIL",
               "decoded": bits_to_str(decoded), "transcript": transcript(theta, plan.queries, answers)}
        return json.dumps(doc, indent=2), 0 if ok else 1
    lines = [
        f"graph {mg.base.name or '?'}  r={mg.multiplicity}  {theta_label(theta, mg.multiplicity)}  seed={cfg.seed}",
        f"file length L = {scheme.file_len}",
    ]
    for q, a in zip(plan.queries, answers):
        lines.append(f"  S{q.server}: {bits_to_str(a)}  = " + " , ".join(render_term(t) for t in canonical_query(q)))
    lines += [
        f"download D = {download}",
        f"rate = {human_rational(rate)}",
        f"decoded: {'OK' if ok else 'FAIL'} ({bits_to_str(decoded)})",
    ]
    return "\n".join(lines), 0 if ok else 1


def cmd_audit(cfg: RunConfig) -> tuple[str, int]:
    mg = resolve_graph(cfg)
    scheme = build_scheme(mg, cfg.variant)
    base = scheme.base if isinstance(scheme, LiftedScheme) else scheme
    try:
        reports = [
            audit.check_reliability(scheme, trials=cfg.trials, seed=cfg.seed),
            audit.check_privacy(scheme, mode=cfg.mode, samples=cfg.samples,
                                epsilon=cfg.epsilon, seed=cfg.seed),
            audit.check_srp(base),
            audit.check_answer_ranks(scheme, seed=cfg.seed),
        ]
    except audit.BudgetExceeded as exc:
        raise UsageError(f"{exc}; try --mode sampled") from None
    failed = any(not rep.passed for rep in reports)
    if cfg.json:
        return json.dumps([rep.to_json() for rep in reports], indent=2), int(failed)
    lines = [f"audit {mg.base.name or '?'}  r={mg.multiplicity}  L={scheme.file_len}"
             + (f"  variant={cfg.variant}" if cfg.variant else "")]
    for rep in reports:
        if isinstance(rep, audit.SrpCertificate):
            counts = sorted({tuple(e["counts"]) for e in rep.entries})
            lines.append(f"  {rep.verdict}  srp           per-theta counts {counts}")
            continue
        stat = rep.statistic
        stat = str(stat) if isinstance(stat, Fraction) else (f"{stat:.5f}" if isinstance(stat, float) else stat)
        lines.append(f"  {rep.verdict}  {rep.property:<13} mode={rep.mode} statistic={stat}")
    return "\n".join(lines), int(failed)


def _base_rate(cfg: RunConfig, mg: MultiGraph) -> Fraction | None:
    if cfg.base_rate is not None:
        try:
            return Fraction(cfg.base_rate)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --base-rate {cfg.base_rate!r}") from None
    if is_labeled_path(mg.base):
        base = PathScheme(mg.num_vertices)
        if audit.check_srp(base).passed:
            return base.rate
    return None


def cmd_bounds(cfg: RunConfig) -> tuple[str, int]:
    mg = resolve_graph(cfg)
    rep = capacity_report(mg.base, mg.multiplicity, _base_rate(cfg, mg))
    if cfg.json:
        return json.dumps(rep.to_json(), indent=2), 0
    lower = human_rational(rep.lower) if rep.lower is not None else "n/a"
    lines = [
        f"graph {rep.graph}  r={rep.r}",
        f"  lower bound        {lower}",
        f"  upper (closed)     {human_rational(rep.upper_closed)}",
        f"  upper (LP)         {human_rational(rep.upper_lp)}",
        f"  tight              {'yes' if rep.tight else 'no'}",
    ]
    return "\n".join(lines), 0


COMMANDS = {"table": cmd_table, "simulate": cmd_simulate, "audit": cmd_audit, "bounds": cmd_bounds}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgpir", description="PIR on multigraph-based replicated storage")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--graph", required=True, help="graph file, or family:n such as path:4")
        p.add_argument("--r", type=int, help="override the file's multiplicity")
        p.add_argument("--theta", help="EDGE or EDGE,COPY")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--identity-perms", action="store_true")
        p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--samples", type=int, default=audit.DEFAULT_SAMPLES)
        p.add_argument("--epsilon", type=float, default=audit.DEFAULT_EPSILON)
        p.add_argument("--variant", choices=("unflipped", "skewed", "corrupt"),
                       help="run a negative-control scheme")
        p.add_argument("--base-rate", help="certified SRP base rate p/q")
        p.add_argument("--json", action="store_true")
        p.add_argument("--out", help="write output here instead of stdout")
    return parser


def parse_config(argv=None) -> RunConfig:
    return RunConfig(**vars(make_parser().parse_args(argv)))


def run(cfg: RunConfig) -> tuple[str, int]:
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    cfg = parse_config(argv)
    try:
        text, code = run(cfg)
    except (UsageError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
