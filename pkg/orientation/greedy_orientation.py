import logging
from dataclasses import dataclass

from core_geometry.errors import UsageError
from core_geometry.geometry import TriangleTriple
from orientation.oriented_graph import OrientedGraph


@dataclass
class OrientationStats:
    triangles: int = 0
    fresh: int = 0        # no edge oriented yet, whole triangle oriented
    completed: int = 0    # some edges oriented, finished as a directed 3-cycle
    skipped: int = 0      # no consistent 3-cycle left (or nothing left to orient)
    fallback_edges: int = 0


def fallback_direction(u, v):
    """Orientation rule used whenever the sweep leaves a choice: lower index to higher."""
    return (u, v) if u < v else (v, u)


def _cycles(triple):
    p, q, r = triple.p, triple.q, triple.r
    forward = ((p, q), (q, r), (r, p))
    backward = ((q, p), (r, q), (p, r))
    return forward, backward


def greedy_orient_with_stats(ps, eps1, triples):
    """
    Greedy orientation of the union of triangle edges, processed by ascending
    perimeter (stable, so equal perimeters keep their order in `triples`).

    Args:
        ps (PointSet): The point set (vertex count and index range).
        eps1 (float): Approximation factor the triples were computed with;
            each (p, q; r) is expected to satisfy |pqr| <= (1+eps1) |Delta*(p, q)|.
        triples (list[TriangleTriple]): The triangle list.

    Returns:
        tuple: (OrientedGraph, OrientationStats)
    """
    n = len(ps)
    if eps1 < 0:
        raise UsageError(f"eps1 must be nonnegative, got {eps1}")
    for position, triple in enumerate(triples):
        if not isinstance(triple, TriangleTriple):
            raise UsageError(f"entry {position} of the triangle list is not a TriangleTriple: {triple!r}")
        for vertex in (triple.p, triple.q, triple.r):
            if not 0 <= vertex < n:
                raise UsageError(f"triangle {position} references vertex {vertex} outside 0..{n - 1}")

    stats = OrientationStats(triangles=len(triples))
    # undirected edge (sorted pair) -> chosen direction
    direction = {}
    support = {}
    for triple in triples:
        for edge in triple.edges:
            support.setdefault(edge, None)

    for triple in sorted(triples, key=lambda t: t.perimeter):
        forward, backward = _cycles(triple)
        oriented = [direction.get(fallback_direction(u, v)) for u, v in forward]

        if all(d is None for d in oriented):
            cycle = forward if fallback_direction(triple.p, triple.q) == (triple.p, triple.q) else backward
            stats.fresh += 1
        elif all(d is not None for d in oriented):
            stats.skipped += 1
            continue
        else:
            cycle = None
            for candidate in (forward, backward):
                if all(d is None or d == e for d, e in zip(oriented, candidate)):
                    cycle = candidate
                    break
            if cycle is None:
                stats.skipped += 1
                continue
            stats.completed += 1

        for u, v in cycle:
            direction.setdefault(fallback_direction(u, v), (u, v))

    graph = OrientedGraph(n)
    for edge in support:
        if edge not in direction:
            direction[edge] = fallback_direction(*edge)
            stats.fallback_edges += 1
        graph.add_edge(*direction[edge])

    logging.debug(
        f"Greedy orientation: {stats.triangles} triangles, {stats.fresh} fresh, "
        f"{stats.completed} completed, {stats.skipped} skipped, {stats.fallback_edges} fallback edges."
    )
    return graph, stats


def greedy_orient(ps, eps1, triples):
    """Greedy orientation of a triangle list; see greedy_orient_with_stats."""
    graph, _ = greedy_orient_with_stats(ps, eps1, triples)
    return graph
