"""Random and structured graph corpora."""

import logging
import math

import networkx as nx
import numpy as np

from spxlayout.errors import GenerationFailed
from spxlayout.graph.core import Edge, Graph, derive_seed, is_connected

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 1000


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def generate_random_dag(
    n: int,
    density: float,
    seed: int,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Graph:
    """Random connected DAG with round(density * n) directed edges.

    Vertex pairs are sampled uniformly; a directed edge is added only when the
    pair is not yet adjacent and the edge creates no cycle. Disconnected
    results are discarded and regenerated from the next derived seed.

    Args:
        n: Vertex count (>= 2).
        density: Edges per vertex.
        seed: Base seed.
        max_attempts: Regeneration budget.

    Returns:
        A connected graph whose edges are all directed and acyclic.

    Raises:
        ValueError: If the edge count cannot be reached without multi-edges.
        GenerationFailed: If no connected DAG appeared within the budget.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    m = _round_half_up(density * n)
    if m < 1 or m > n * (n - 1) // 2:
        raise ValueError(f"density {density} gives {m} edges, not achievable on {n} vertices")

    # Each sample either adds an edge or is rejected; cap rejections per attempt.
    sample_budget = 200 * m + 1000

    for attempt in range(max_attempts):
        rng = np.random.default_rng(derive_seed(seed, attempt))
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(n))
        order: list[tuple[int, int]] = []

        for _ in range(sample_budget):
            if len(order) == m:
                break
            u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
            if digraph.has_edge(u, v) or digraph.has_edge(v, u):
                continue
            if nx.has_path(digraph, v, u):
                continue
            digraph.add_edge(u, v)
            order.append((u, v))

        if len(order) < m:
            logger.debug("dag attempt %d stalled at %d/%d edges", attempt, len(order), m)
            continue

        graph = Graph.from_pairs(n, order, directed=True)
        if is_connected(graph):
            return graph
        logger.debug("dag attempt %d disconnected, retrying", attempt)

    raise GenerationFailed(
        f"no connected DAG with n={n}, density={density} after {max_attempts} attempts"
    )


def generate_binary_tree(depth: int) -> Graph:
    """Complete balanced binary tree with edges directed root to leaf.

    Vertex 0 is the root; vertex i has children 2i+1 and 2i+2.
    """
    if not 2 <= depth <= 5:
        raise ValueError(f"depth must be in 2..5, got {depth}")
    n = 2 ** (depth + 1) - 1
    edges = [
        Edge(parent, child, directed=True)
        for parent in range(n)
        for child in (2 * parent + 1, 2 * parent + 2)
        if child < n
    ]
    return Graph(n=n, edges=tuple(edges))


def community_sizes(n: int, communities: int) -> list[int]:
    """Split n vertices into near-equal blocks, larger blocks first."""
    base, extra = divmod(n, communities)
    return [base + 1 if i < extra else base for i in range(communities)]


def generate_community_graph(
    n: int,
    communities: int,
    p_in: float,
    p_out: float,
    seed: int,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Graph:
    """Connected planted-partition graph with undirected edges.

    Raises:
        ValueError: On out-of-range arguments.
        GenerationFailed: If no connected sample appeared within the budget.
    """
    if not 1 <= communities <= n:
        raise ValueError(f"need 1 <= communities <= n, got communities={communities}, n={n}")
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ValueError(f"probabilities must be in [0, 1], got p_in={p_in}, p_out={p_out}")

    sizes = community_sizes(n, communities)
    for attempt in range(max_attempts):
        sample = nx.random_partition_graph(
            sizes, p_in, p_out, seed=derive_seed(seed, attempt) % 2**32
        )
        pairs = sorted((min(u, v), max(u, v)) for u, v in sample.edges())
        graph = Graph.from_pairs(n, pairs)
        if is_connected(graph):
            return graph
        logger.debug("community attempt %d disconnected, retrying", attempt)

    raise GenerationFailed(
        f"no connected community graph with n={n}, p_in={p_in}, p_out={p_out} "
        f"after {max_attempts} attempts"
    )


def upward_corpus(seed: int, dag_count: int = 30) -> list[tuple[str, Graph]]:
    """Four binary trees (depth 2..5) plus `dag_count` density-2 DAGs, n in 5..24."""
    corpus = [(f"tree_d{depth}", generate_binary_tree(depth)) for depth in range(2, 6)]
    for i in range(dag_count):
        n = 5 + (i * 20) // dag_count
        corpus.append((f"dag_{i:02d}_n{n}", generate_random_dag(n, 2.0, derive_seed(seed, i))))
    return corpus


def community_corpus(
    count: int,
    seed: int,
    n: int = 50,
    communities: int = 5,
    p_in: float = 0.3,
    p_out: float = 0.01,
) -> list[tuple[str, Graph]]:
    """`count` community graphs with independent derived seeds."""
    return [
        (
            f"community_{i:02d}",
            generate_community_graph(n, communities, p_in, p_out, derive_seed(seed, i)),
        )
        for i in range(count)
    ]
