"""
Oriented graph on the vertex set 0..n-1, stored as a networkx DiGraph.

At most one of (u, v) and (v, u) is ever present and there are no self-loops.
Edge lengths are not stored; they come from the point set (or metric matrix)
the graph is measured against.
"""

import logging
from collections import Counter

import networkx as nx
import numpy as np

from core_geometry.errors import UsageError


class OrientedGraph:

    def __init__(self, n, edges=()):
        if n < 0:
            raise UsageError(f"vertex count must be nonnegative, got {n}")
        self._graph = nx.DiGraph()
        self._graph.add_nodes_from(range(n))
        for u, v in edges:
            self.add_edge(u, v)

    @property
    def n(self):
        return self._graph.number_of_nodes()

    def add_edge(self, u, v):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise UsageError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if u == v:
            raise UsageError(f"self-loop on vertex {u} is not allowed")
        if self._graph.has_edge(v, u):
            raise UsageError(f"edge ({u}, {v}) would pair with the existing edge ({v}, {u})")
        self._graph.add_edge(u, v)

    def has_edge(self, u, v):
        return self._graph.has_edge(u, v)

    def out_neighbours(self, u):
        return sorted(self._graph.successors(u))

    def edges(self):
        """All directed edges sorted by (u, v)."""
        return sorted(self._graph.edges())

    def number_of_edges(self):
        return self._graph.number_of_edges()

    def support(self):
        """Undirected support edges as sorted index pairs."""
        return sorted((min(u, v), max(u, v)) for u, v in self._graph.edges())

    def with_edge(self, u, v):
        """Copy of this graph with one more edge."""
        return OrientedGraph(self.n, self.edges() + [(u, v)])

    def to_networkx(self, lengths=None):
        """
        Copy as a networkx DiGraph. With `lengths` (a matrix, or any mapping
        indexed by (u, v)) every edge carries a 'weight'.
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        for u, v in self._graph.edges():
            if lengths is None:
                graph.add_edge(u, v)
            else:
                graph.add_edge(u, v, weight=float(lengths[u, v]))
        return graph

    def length_matrix(self, lengths):
        """
        Directed adjacency matrix: lengths[u, v] on edges, 0 on the diagonal, inf elsewhere.
        """
        adjacency = np.full((self.n, self.n), np.inf)
        np.fill_diagonal(adjacency, 0.0)
        for u, v in self._graph.edges():
            adjacency[u, v] = lengths[u, v]
        return adjacency

    def __eq__(self, other):
        if not isinstance(other, OrientedGraph):
            return NotImplemented
        return self.n == other.n and self.edges() == other.edges()

    def __repr__(self):
        return f"OrientedGraph(n={self.n}, m={self.number_of_edges()})"

# --- Graph Checks ---

def closed_walk_coverage(g):
    """
    True when every pair of vertices lies on a common directed closed walk,
    i.e. the graph is strongly connected.
    """
    if g.n <= 1:
        return True
    return nx.is_strongly_connected(g._graph)


def graph_stats(g):
    """
    Basic statistics about an oriented graph.

    Returns:
        dict: vertex and edge counts, edges per vertex, out-degree histogram
        and the number of strongly connected components.
    """
    out_degrees = Counter(d for _, d in g._graph.out_degree())
    return {
        'vertices': g.n,
        'edges': g.number_of_edges(),
        'edges_per_vertex': g.number_of_edges() / g.n if g.n else 0.0,
        'out_degree_histogram': dict(sorted(out_degrees.items())),
        'strong_components': nx.number_strongly_connected_components(g._graph) if g.n else 0,
    }


def validate_oriented_graph(g):
    """
    Runs the structural checks on a graph and reports problems found.

    Checks performed:
    1. Orientation invariant: no antiparallel edge pairs.
    2. Dead ends: vertices without an outgoing or an incoming edge.
    3. Closed-walk coverage: every pair of vertices mutually reachable.

    Returns:
        list[str]: Human-readable problems; empty when the graph passes.
    """
    problems = []
    for u, v in g._graph.edges():
        if u < v and g._graph.has_edge(v, u):
            problems.append(f"both ({u}, {v}) and ({v}, {u}) present")
    if g.n > 1:
        for vertex in range(g.n):
            if g._graph.out_degree(vertex) == 0 or g._graph.in_degree(vertex) == 0:
                problems.append(f"vertex {vertex} is a dead end (in={g._graph.in_degree(vertex)}, out={g._graph.out_degree(vertex)})")
    if not closed_walk_coverage(g):
        components = nx.number_strongly_connected_components(g._graph)
        problems.append(f"not every pair lies on a closed walk ({components} strongly connected components)")

    if problems:
        logging.warning(f"Graph validation found {len(problems)} problem(s).")
    else:
        logging.info(f"Graph validation passed for {g!r}.")
    return problems
