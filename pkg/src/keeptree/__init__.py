"""Find a copy T' of a tree T in a graph G whose edge removal keeps G 3-connected
(or 3-edge-connected), with exhaustive oracles to check the answers."""

from .connectivity import (Fan, connectivity_predicate, edge_connectivity, edge_connectivity_at_least,
                           find_edge_cut_below, find_vertex_cut_below, min_fan, vertex_connectivity,
                           vertex_connectivity_at_least)
from .graph import (Graph, GraphError, GraphFormatError, encode_graph6, induced_subgraph, min_degree, parse_graph,
                    parse_graph6, remove_edges)
from .oracle import ExploreReport, enumerate_graphs_labeled, enumerate_tree_embeddings, explore, oracle_find
from .search import FailureDiagnostic, SearchState, find_removable_tree, run_search
from .skeleton import Potential, Skeleton, initial_skeleton, validate
from .trees import Embedding, TreePattern, embed_tree, enumerate_trees, extend_embedding, greedy_embed_internal

__all__ = [
    "Embedding", "ExploreReport", "FailureDiagnostic", "Fan", "Graph", "GraphError", "GraphFormatError",
    "Potential", "SearchState", "Skeleton", "TreePattern", "connectivity_predicate", "edge_connectivity",
    "edge_connectivity_at_least", "embed_tree", "encode_graph6", "enumerate_graphs_labeled",
    "enumerate_tree_embeddings", "enumerate_trees", "explore", "extend_embedding", "find_edge_cut_below",
    "find_removable_tree", "find_vertex_cut_below", "greedy_embed_internal", "induced_subgraph",
    "initial_skeleton", "min_degree", "min_fan", "oracle_find", "parse_graph", "parse_graph6", "remove_edges",
    "run_search", "validate", "vertex_connectivity", "vertex_connectivity_at_least",
]
