"""Lower, closed-form and LP upper bounds across graph families and r."""

import argparse
import json
from dataclasses import asdict, dataclass, field

from mgpir.bounds import capacity_report, solve_capacity_lp, vertex_optimum
from mgpir.graph import family_graph, is_labeled_path
from mgpir.path_scheme import path_rate


@dataclass
class SurveyConfig:
    graphs: list[str] = field(default_factory=lambda: [f"path:{n}" for n in range(2, 9)]
                              + ["cycle:4", "cycle:5", "star:4", "complete:5"])
    multiplicities: list[int] = field(default_factory=lambda: [1, 2, 3])
    oracle_limit: int = 6


def run(cfg: SurveyConfig) -> list[dict]:
    rows = []
    for spec in cfg.graphs:
        g = family_graph(spec)
        base = path_rate(g.num_vertices) if is_labeled_path(g) else None
        for r in cfg.multiplicities:
            rep = capacity_report(g, r, base).to_json()
            if g.num_vertices <= cfg.oracle_limit:
                rep["oracle_agrees"] = vertex_optimum(g, r) == solve_capacity_lp(g, r).optimum
            rows.append(rep)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", nargs="+", default=SurveyConfig().graphs)
    ap.add_argument("--r", type=int, nargs="+", default=SurveyConfig().multiplicities)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = SurveyConfig(args.graphs, args.r)
    rows = run(cfg)
    for row in rows:
        print(f"{row['graph']:<4} r={row['r']}  lower {row['lower'] or '-':<6} closed {row['upper_closed']:<6}"
              f" LP {row['upper_lp']:<6} {'tight' if row['tight'] else ''}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
