"""
Directed shortest-path oracles used by the approximate dilation.

An oracle answers (u, v) with a value in [d(u, v), k * d(u, v)], where d is
the true directed shortest-path length (inf when v is unreachable) and k is
the oracle's advertised `factor`.
"""

import heapq
import math
from abc import ABC, abstractmethod

from core_geometry.errors import UsageError
from core_geometry.geometry import distance_matrix


class DistanceOracle(ABC):
    """Abstract k-approximate directed shortest-path oracle."""

    factor = 1.0
    cost_class = "unspecified"

    @abstractmethod
    def distance(self, u, v):
        """k-approximate length of a shortest path from u to v (math.inf if none)."""


class DijkstraOracle(DistanceOracle):
    """
    Exact oracle (k = 1): Dijkstra from the query source over Euclidean edge
    lengths. Single-source results are cached, so repeated queries from the
    same source are dictionary lookups.
    """

    factor = 1.0
    cost_class = "O(m log n) per new source, O(1) cached"

    def __init__(self, g, lengths):
        self.n = g.n
        self._adjacency = {u: [(v, float(lengths[u, v])) for v in g.out_neighbours(u)] for u in range(g.n)}
        for u, neighbours in self._adjacency.items():
            for v, length in neighbours:
                if length < 0:
                    raise UsageError(f"edge ({u}, {v}) has negative length {length}")
        self._cache = {}
        self.sources_expanded = 0

    def distance(self, u, v):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise UsageError(f"query ({u}, {v}) outside 0..{self.n - 1}")
        if u == v:
            return 0.0
        distances = self._cache.get(u)
        if distances is None:
            distances = self._single_source(u)
            self._cache[u] = distances
        return distances.get(v, math.inf)

    def _single_source(self, source):
        """
        Dijkstra with a binary heap of (distance, vertex) entries; stale entries are skipped.
        """
        self.sources_expanded += 1
        distances = {source: 0.0}
        pq = [(0.0, source)]
        while pq:
            current, vertex = heapq.heappop(pq)
            # a shorter path to this vertex was already settled
            if current > distances.get(vertex, math.inf):
                continue
            for neighbour, length in self._adjacency[vertex]:
                candidate = current + length
                if candidate < distances.get(neighbour, math.inf):
                    distances[neighbour] = candidate
                    heapq.heappush(pq, (candidate, neighbour))
        return distances


class InflatedOracle(DistanceOracle):
    """
    Wraps an oracle and multiplies every answer by `factor` >= 1. With an exact
    base this is a k-approximate oracle that always returns the worst allowed value.
    """

    def __init__(self, base, factor):
        if factor < 1:
            raise UsageError(f"approximation factor must be >= 1, got {factor}")
        self.base = base
        self.factor = base.factor * factor
        self.cost_class = base.cost_class
        self._scale = factor

    def distance(self, u, v):
        return self._scale * self.base.distance(u, v)


def dijkstra_oracle(g, ps):
    """Exact (k = 1) oracle over the Euclidean edge lengths of `g` on `ps`."""
    if g.n != len(ps):
        raise UsageError(f"graph has {g.n} vertices but the point set has {len(ps)} points")
    return DijkstraOracle(g, distance_matrix(ps))
