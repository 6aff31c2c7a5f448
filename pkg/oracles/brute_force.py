"""
Brute-force reference implementations.

These are deliberately slow and share no code with the fast paths they check:
edge lengths and triangles use their own scalar loops, shortest paths come
from networkx's Bellman-Ford.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from core_geometry.errors import DilationUndefinedError, NoTriangleError, UsageError
from core_geometry.geometry import TriangleTriple
from orientation.oriented_graph import OrientedGraph

MAX_SEARCH_EDGES = 20


def _euclidean(a, b):
    total = 0.0
    for i in range(len(a)):
        diff = a[i] - b[i]
        total += diff * diff
    return math.sqrt(total)

# --- Minimum Triangle ---

def scan_min_triangle(ps, p, q):
    """
    Minimum-perimeter triangle containing p and q by a plain Python loop.

    Returns:
        TriangleTriple: (p, q; x) with the smallest |px| + |qx|, first x on ties.
    """
    n = len(ps)
    if n < 3:
        raise NoTriangleError(n)
    ps.check_index(p)
    ps.check_index(q)
    if p == q:
        raise UsageError(f"query points must differ, got p = q = {p}")

    point_p, point_q = ps[p], ps[q]
    best_x, best_sum = -1, math.inf
    for x in range(n):
        if x == p or x == q:
            continue
        point_x = ps[x]
        focal_sum = _euclidean(point_p, point_x) + _euclidean(point_q, point_x)
        if focal_sum < best_sum:
            best_x, best_sum = x, focal_sum

    point_x = ps[best_x]
    perimeter = _euclidean(point_p, point_q) + _euclidean(point_q, point_x) + _euclidean(point_x, point_p)
    return TriangleTriple(p, q, best_x, perimeter)

# --- Shortest Paths ---

def bellman_ford_apsp(g, ps):
    """
    All-pairs directed distances of `g` with Euclidean edge lengths from `ps`,
    one networkx Bellman-Ford run per source.

    Returns:
        np.ndarray: n x n matrix, inf where unreachable, 0 on the diagonal.
    """
    if g.n != len(ps):
        raise UsageError(f"graph has {g.n} vertices but the point set has {len(ps)} points")
    graph = g.to_networkx({(u, v): _euclidean(ps[u], ps[v]) for u, v in g.edges()})

    distances = np.full((g.n, g.n), np.inf)
    for source, lengths in nx.all_pairs_bellman_ford_path_length(graph, weight='weight'):
        for target, length in lengths.items():
            distances[source, target] = length
    return distances


def naive_oriented_dilation(ps, g):
    """
    Oriented dilation by definition: Bellman-Ford distances and a scanned
    minimum triangle for every pair.

    Returns:
        tuple: (value, (p, q)) for the first pair attaining the maximum.
    """
    n = len(ps)
    if n < 3:
        raise DilationUndefinedError(n)
    apsp = bellman_ford_apsp(g, ps)
    return _dilation_from(apsp, _triangle_table(ps))


def _triangle_table(ps):
    return {(p, q): scan_min_triangle(ps, p, q).perimeter for p, q in itertools.combinations(range(len(ps)), 2)}


def _dilation_from(apsp, triangles):
    best_value, best_pair = -math.inf, None
    for (p, q), perimeter in triangles.items():
        value = (apsp[p, q] + apsp[q, p]) / perimeter
        if value > best_value:
            best_value, best_pair = value, (p, q)
    return float(best_value), best_pair

# --- Orientation Search ---

@dataclass
class OrientationSearchResult:
    value: float
    orientation: list
    enumerated: int


def exhaustive_best_orientation(ps, edges):
    """
    Smallest oriented dilation over every orientation of an undirected edge set.

    Orientation number `mask` reverses edge i of `edges` exactly when bit i
    is set. Masks are tried in increasing order and only a strictly better
    value replaces the incumbent, so the lowest mask wins ties.

    Args:
        ps (PointSet): At least three points.
        edges (list[tuple[int, int]]): Undirected edges, at most 20 of them.

    Returns:
        OrientationSearchResult: best value, one optimal orientation (directed
        edges in input order) and the number of orientations tried (2^m).
    """
    n = len(ps)
    if n < 3:
        raise DilationUndefinedError(n)
    edges = [tuple(int(v) for v in edge) for edge in edges]
    if len(edges) > MAX_SEARCH_EDGES:
        raise UsageError(f"exhaustive search is capped at {MAX_SEARCH_EDGES} edges, got {len(edges)}")
    seen = set()
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"invalid edge ({u}, {v}) for {n} points")
        if (min(u, v), max(u, v)) in seen:
            raise UsageError(f"edge ({u}, {v}) listed twice")
        seen.add((min(u, v), max(u, v)))

    triangles = _triangle_table(ps)
    best_value, best_orientation = math.inf, None
    enumerated = 0
    for mask in range(1 << len(edges)):
        enumerated += 1
        orientation = [(v, u) if mask >> i & 1 else (u, v) for i, (u, v) in enumerate(edges)]
        value, _ = _dilation_from(bellman_ford_apsp(OrientedGraph(n, orientation), ps), triangles)
        if best_orientation is None or value < best_value:
            best_value, best_orientation = value, orientation

    logging.info(f"Exhaustive orientation search over {enumerated} orientations: best dilation {best_value:.9g}.")
    return OrientationSearchResult(value=best_value, orientation=best_orientation, enumerated=enumerated)
