"""Graph model, hop distances and structural predicates."""

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from spxlayout.errors import DisconnectedGraph, InvalidGraph, NotADag

FloatMatrix = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Edge:
    """An edge between two vertex indices.

    Undirected edges are stored with the endpoints as given; direction only
    matters when `directed` is set.
    """

    source: int
    target: int
    directed: bool = False

    @property
    def key(self) -> frozenset[int]:
        """Unordered endpoint pair."""
        return frozenset((self.source, self.target))


@dataclass(frozen=True)
class Graph:
    """Vertex count plus edge list with optional per-edge direction."""

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidGraph(f"vertex count must be >= 1, got {self.n}")

        seen: set[frozenset[int]] = set()
        for index, edge in enumerate(self.edges):
            if not (0 <= edge.source < self.n and 0 <= edge.target < self.n):
                raise InvalidGraph(
                    f"edge {index} ({edge.source}, {edge.target}) out of range for n={self.n}"
                )
            if edge.source == edge.target:
                raise InvalidGraph(f"edge {index} is a self-loop on vertex {edge.source}")
            if edge.key in seen:
                raise InvalidGraph(
                    f"edge {index} duplicates pair ({edge.source}, {edge.target})"
                )
            seen.add(edge.key)

    @classmethod
    def from_pairs(
        cls,
        n: int,
        pairs: list[tuple[int, int]],
        directed: bool = False,
    ) -> "Graph":
        """Build a graph from (source, target) tuples sharing one direction flag."""
        return cls(n=n, edges=tuple(Edge(s, t, directed) for s, t in pairs))

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @property
    def directed_edges(self) -> list[Edge]:
        """Edges carrying a direction flag."""
        return [e for e in self.edges if e.directed]

    @property
    def has_directed_edges(self) -> bool:
        return any(e.directed for e in self.edges)

    @cached_property
    def _adjacency(self) -> tuple[frozenset[int], ...]:
        adjacent: list[set[int]] = [set() for _ in range(self.n)]
        for edge in self.edges:
            adjacent[edge.source].add(edge.target)
            adjacent[edge.target].add(edge.source)
        return tuple(frozenset(a) for a in adjacent)

    def neighbors(self, v: int) -> frozenset[int]:
        """Vertices adjacent to `v`, ignoring direction."""
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    @cached_property
    def endpoints(self) -> npt.NDArray[np.intp]:
        """m x 2 array of (source, target) indices."""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.intp)
        return np.array([(e.source, e.target) for e in self.edges], dtype=np.intp)

    def to_networkx(self) -> nx.Graph:
        """Undirected networkx view (direction flags dropped)."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from((e.source, e.target) for e in self.edges)
        return graph

    def directed_subgraph(self) -> nx.DiGraph:
        """networkx DiGraph over all vertices holding only the directed edges."""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(self.n))
        digraph.add_edges_from((e.source, e.target) for e in self.edges if e.directed)
        return digraph


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Hop distances `d` and stress weights `w = d^-2` (zero diagonal)."""

    d: FloatMatrix
    w: FloatMatrix = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.d.shape[0])


def all_pairs_shortest_paths(g: Graph) -> DistanceMatrix:
    """Unweighted shortest-path distances treating every edge as undirected.

    Raises:
        DisconnectedGraph: If any vertex pair is unreachable.
    """
    if g.m:
        rows, cols = g.endpoints[:, 0], g.endpoints[:, 1]
        adjacency = csr_matrix(
            (np.ones(g.m), (rows, cols)),
            shape=(g.n, g.n),
        )
    else:
        adjacency = csr_matrix((g.n, g.n))

    d = np.asarray(shortest_path(adjacency, directed=False, unweighted=True), dtype=np.float64)
    if not np.all(np.isfinite(d)):
        unreachable = np.argwhere(~np.isfinite(d))[0]
        raise DisconnectedGraph(
            f"graph is disconnected: no path between {unreachable[0]} and {unreachable[1]}"
        )

    w = np.zeros_like(d)
    off_diagonal = ~np.eye(g.n, dtype=bool)
    w[off_diagonal] = d[off_diagonal] ** -2.0
    return DistanceMatrix(d=d, w=w)


def graph_diameter(dm: DistanceMatrix) -> float:
    """Largest hop distance in the matrix."""
    return float(dm.d.max()) if dm.n > 1 else 0.0


def is_dag(g: Graph) -> bool:
    """True when the directed edges contain no directed cycle."""
    return bool(nx.is_directed_acyclic_graph(g.directed_subgraph()))


def topological_order(g: Graph) -> list[int]:
    """Vertices in a deterministic topological order of the directed edges.

    Ties are broken by vertex index so repeated calls agree.

    Raises:
        NotADag: If the directed edges contain a cycle.
    """
    digraph = g.directed_subgraph()
    try:
        return [int(v) for v in nx.lexicographical_topological_sort(digraph)]
    except nx.NetworkXUnfeasible as e:
        raise NotADag("directed edges contain a cycle") from e


def is_connected(g: Graph) -> bool:
    """Connectivity ignoring edge direction."""
    return bool(nx.is_connected(g.to_networkx()))


def independent_edge_pairs(g: Graph) -> list[tuple[int, int]]:
    """Edge index pairs (i < j) whose four endpoints are distinct.

    Edges sharing an endpoint can never be strictly separated by a line, so
    those pairs are left out of the penalty sum.
    """
    pairs: list[tuple[int, int]] = []
    for i, first in enumerate(g.edges):
        ends = (first.source, first.target)
        for j in range(i + 1, g.m):
            second = g.edges[j]
            if second.source in ends or second.target in ends:
                continue
            pairs.append((i, j))
    return pairs


def derive_seed(*parts: int | float | str) -> int:
    """Stable 64-bit seed from an ordered tuple of parts.

    Uses BLAKE2b over the parts' reprs so the value is identical across
    processes and interpreter runs.
    """
    digest = hashlib.blake2b(repr(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")
