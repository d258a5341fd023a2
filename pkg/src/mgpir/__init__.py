"""Private information retrieval on multigraph-based replicated storage."""

from .graph import MultiGraph, SimpleGraph, build_graph, path_graph, cycle_graph, star_graph, complete_graph
from .model import FileId, Database, PermutationPack, random_database, evaluate_answer, canonical_query
from .path_scheme import PathScheme, path_plan, path_decode, path_rate
from .lift import LiftedScheme, lift_plan, lift_decode, lifted_rate, download_cost
from .bounds import capacity_report, lower_bound, upper_closed, lp_upper, multiplicity_factor

__all__ = [
    "MultiGraph", "SimpleGraph", "build_graph", "path_graph", "cycle_graph", "star_graph",
    "complete_graph", "FileId", "Database", "PermutationPack", "random_database",
    "evaluate_answer", "canonical_query", "PathScheme", "path_plan", "path_decode", "path_rate",
    "LiftedScheme", "lift_plan", "lift_decode", "lifted_rate", "download_cost",
    "capacity_report", "lower_bound", "upper_closed", "lp_upper", "multiplicity_factor",
]
