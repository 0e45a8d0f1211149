"""Graph model, distances and corpus generators."""

from spxlayout.graph.core import (
    DistanceMatrix,
    Edge,
    Graph,
    all_pairs_shortest_paths,
    derive_seed,
    graph_diameter,
    independent_edge_pairs,
    is_connected,
    is_dag,
    topological_order,
)
from spxlayout.graph.generators import (
    community_corpus,
    generate_binary_tree,
    generate_community_graph,
    generate_random_dag,
    upward_corpus,
)

__all__ = [
    "DistanceMatrix",
    "Edge",
    "Graph",
    "all_pairs_shortest_paths",
    "community_corpus",
    "derive_seed",
    "generate_binary_tree",
    "generate_community_graph",
    "generate_random_dag",
    "graph_diameter",
    "independent_edge_pairs",
    "is_connected",
    "is_dag",
    "topological_order",
    "upward_corpus",
]
