"""Diagonal distance of graphs: exact search, heuristics, and the analytic constants."""

from .analytic import constants, predicted_fhat, solve_constants
from .exact_solver import SolveResult, diagonal_distance, naive_diagonal_distance
from .flip_game import Witness, verify_witness
from .graph_core import Graph, GraphError, VertexSet, b_set, from_edge_list, gnp, parse_graph6, serialize_graph6
from .heuristic import best_witness, pair_search

__all__ = [
    "Graph", "GraphError", "VertexSet", "SolveResult", "Witness",
    "b_set", "best_witness", "constants", "diagonal_distance", "from_edge_list", "gnp",
    "naive_diagonal_distance", "pair_search", "parse_graph6", "predicted_fhat", "serialize_graph6",
    "solve_constants", "verify_witness",
]
