"""Storage topologies: simple graphs and their uniform r-multigraph extensions.

Vertices are servers, edges are file bundles. Everything is 1-indexed: vertex
``v`` is in ``1..N`` and edge ``i`` is in ``1..K'`` in the order given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

DEFAULT_MATCHING_LIMIT = 24


class GraphError(ValueError):
    """Invalid graph description."""


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class SimpleGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.num_vertices + 1)

    def endpoints(self, edge: int) -> tuple[int, int]:
        return self.edges[edge - 1]

    def incident_edges(self, vertex: int) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges, start=1) if vertex in e)

    def degree(self, vertex: int) -> int:
        return len(self.incident_edges(vertex))

    def relabel(self, mapping: dict[int, int]) -> "SimpleGraph":
        """Return the graph with vertex ``v`` renamed ``mapping[v]`` (edge order kept)."""
        return build_graph(
            self.num_vertices,
            [(mapping[u], mapping[v]) for u, v in self.edges],
            name=self.name,
        )


@dataclass(frozen=True)
class MultiGraph:
    """A simple graph with every edge replaced by ``multiplicity`` parallel files."""

    base: SimpleGraph
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise GraphError("multiplicity must be at least 1")

    @property
    def r(self) -> int:
        return self.multiplicity

    @property
    def num_vertices(self) -> int:
        return self.base.num_vertices

    @property
    def num_files(self) -> int:
        return self.multiplicity * self.base.num_edges

    def stores(self, server: int, edge: int) -> bool:
        return server in self.base.endpoints(edge)


def build_graph(num_vertices: int, edge_list: Iterable[Sequence[int]], name: str = "") -> SimpleGraph:
    if num_vertices < 1:
        raise GraphError("graph needs at least one vertex")
    edges = []
    seen = set()
    for pos, pair in enumerate(edge_list, start=1):
        u, v = (int(x) for x in pair)
        if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
            raise GraphError(f"edge {pos} ({u},{v}) has an endpoint outside 1..{num_vertices}")
        if u == v:
            raise GraphError(f"edge {pos} ({u},{v}) is a self-loop")
        key = frozenset((u, v))
        if key in seen:
            raise GraphError(f"edge {pos} ({u},{v}) duplicates an earlier edge")
        seen.add(key)
        edges.append((u, v))
    return SimpleGraph(num_vertices, tuple(edges), name)


def path_graph(n: int) -> SimpleGraph:
    return build_graph(n, [(i, i + 1) for i in range(1, n)], name=f"P{n}")


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)], name=f"C{n}")


def star_graph(leaves: int) -> SimpleGraph:
    """Star with centre 1 and leaves 2..leaves+1."""
    return build_graph(leaves + 1, [(1, i) for i in range(2, leaves + 2)], name=f"S{leaves}")


def complete_graph(n: int) -> SimpleGraph:
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    return build_graph(n, pairs, name=f"K{n}")


def is_labeled_path(g: SimpleGraph) -> bool:
    """True when ``g`` is exactly P_N with edge i joining vertices i and i+1."""
    return g.num_vertices >= 2 and all(
        frozenset(e) == frozenset((i, i + 1)) for i, e in enumerate(g.edges, start=1)
    ) and g.num_edges == g.num_vertices - 1


def max_degree(g: SimpleGraph) -> int:
    return max(g.degree(v) for v in g.vertices)


def incidence_matrix(g: SimpleGraph) -> list[list[int]]:
    """N x K' 0/1 matrix; entry (v, e) is 1 iff v is an endpoint of e."""
    return [[1 if v in e else 0 for e in g.edges] for v in g.vertices]


def maximum_matching(g: SimpleGraph, limit: int = DEFAULT_MATCHING_LIMIT) -> tuple[int, ...]:
    """Edge indices of one maximum matching, by exhaustive branch and bound.

    Branches on the lowest-index remaining edge (take it or drop it). A branch
    is cut when the matched count plus half the still-coverable vertices
    cannot beat the incumbent.
    """
    if g.num_edges > limit:
        raise GraphError(f"matching search limited to {limit} edges, graph has {g.num_edges}")
    edges = g.edges
    best: list[int] = []

    def search(start: int, used: frozenset, chosen: list[int]):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        free = {v for e in edges[start:] for v in e} - used
        if len(chosen) + len(free) // 2 <= len(best):
            return
        for i in range(start, len(edges)):
            u, v = edges[i]
            if u in used or v in used:
                continue
            chosen.append(i + 1)
            search(i + 1, used | {u, v}, chosen)
            chosen.pop()
            # dropping edge i is covered by later iterations of this loop
            rest = {x for e in edges[i + 1:] for x in e} - used
            if len(chosen) + len(rest) // 2 <= len(best):
                return

    search(0, frozenset(), [])
    return tuple(best)


def matching_number(g: SimpleGraph, limit: int = DEFAULT_MATCHING_LIMIT) -> int:
    return len(maximum_matching(g, limit))


def parse_graph_text(text: str, name: str = "") -> MultiGraph:
    """Parse the ``N r`` / ``u v`` per-line graph format.

    Blank lines and lines starting with ``#`` are skipped.
    """
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            header = (a, b, lineno)
        else:
            pairs.append((a, b, lineno))
    if header is None:
        raise GraphParseError("missing 'N r' header", 1)
    n, r, hline = header
    if n < 1:
        raise GraphParseError("vertex count must be positive", hline)
    if r < 1:
        raise GraphParseError("multiplicity must be positive", hline)
    edges = []
    for u, v, lineno in pairs:
        try:
            build_graph(n, edges + [(u, v)])
        except GraphError as exc:
            raise GraphParseError(str(exc), lineno) from None
        edges.append((u, v))
    return MultiGraph(build_graph(n, edges, name=name), r)


def load_graph(path: str | Path) -> MultiGraph:
    path = Path(path)
    return parse_graph_text(path.read_text(), name=path.stem)


def format_graph_text(mg: MultiGraph) -> str:
    lines = [f"{mg.num_vertices} {mg.multiplicity}"]
    lines += [f"{u} {v}" for u, v in mg.base.edges]
    return "\n".join(lines) + "\n"


FAMILIES = {
    "path": path_graph,
    "cycle": cycle_graph,
    "star": star_graph,
    "complete": complete_graph,
}


def family_graph(spec: str) -> SimpleGraph:
    """Build a named family member from ``family:n`` (e.g. ``path:4``)."""
    family, _, n = spec.partition(":")
    if family not in FAMILIES or not n.isdigit():
        raise GraphError(f"unknown graph family spec {spec!r}")
    return FAMILIES[family](int(n))
