import itertools

import numpy as np
import pytest

from core_geometry.errors import UsageError
from core_geometry.geometry import PointSet, TriangleTriple, distance_matrix, exact_min_triangle
from dilation.dilation_calculator import floyd_warshall_apsp
from min_triangle.triangle_query import TriangleQueryConfig, approx_min_triangle
from orientation.greedy_orientation import fallback_direction, greedy_orient, greedy_orient_with_stats
from orientation.oriented_graph import OrientedGraph, closed_walk_coverage, graph_stats, validate_oriented_graph
from spatial_index.ann_index import build_ann_index

# slack for comparing two float computations of the same bound
ROUNDING = 1e-12

FOUR_POINTS = PointSet([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, -1.0)])

# --- Oriented Graph ---

def test_oriented_graph_rejects_bad_edges():
    g = OrientedGraph(3, [(0, 1)])
    with pytest.raises(UsageError):
        g.add_edge(1, 0)
    with pytest.raises(UsageError):
        g.add_edge(2, 2)
    with pytest.raises(UsageError):
        g.add_edge(0, 3)
    with pytest.raises(UsageError):
        OrientedGraph(-1)


def test_oriented_graph_views():
    g = OrientedGraph(4, [(2, 0), (0, 1), (1, 2), (1, 3)])
    assert g.edges() == [(0, 1), (1, 2), (1, 3), (2, 0)]
    assert g.out_neighbours(1) == [2, 3]
    assert g.support() == [(0, 1), (0, 2), (1, 2), (1, 3)]
    assert g.with_edge(3, 0).number_of_edges() == 5
    assert g.number_of_edges() == 4
    assert g == OrientedGraph(4, [(0, 1), (1, 2), (1, 3), (2, 0)])

    lengths = np.arange(16, dtype=float).reshape(4, 4)
    matrix = g.length_matrix(lengths)
    assert matrix[0, 1] == 1.0 and matrix[1, 0] == np.inf and matrix[2, 2] == 0.0
    assert g.to_networkx(lengths).edges[1, 3]['weight'] == 7.0


def test_closed_walk_coverage_and_validation():
    cycle = OrientedGraph(3, [(0, 1), (1, 2), (2, 0)])
    assert closed_walk_coverage(cycle)
    assert validate_oriented_graph(cycle) == []

    path = OrientedGraph(3, [(0, 1), (1, 2)])
    assert not closed_walk_coverage(path)
    problems = validate_oriented_graph(path)
    assert any("dead end" in problem for problem in problems)
    assert any("closed walk" in problem for problem in problems)


def test_graph_stats():
    g = OrientedGraph(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
    stats = graph_stats(g)
    assert stats['vertices'] == 4
    assert stats['edges'] == 4
    assert stats['edges_per_vertex'] == 1.0
    assert stats['out_degree_histogram'] == {0: 1, 1: 2, 2: 1}
    assert stats['strong_components'] == 2

# --- Greedy Orientation ---

def test_fallback_direction():
    assert fallback_direction(3, 1) == (1, 3)
    assert fallback_direction(1, 3) == (1, 3)


def test_single_triangle_becomes_cycle():
    ps = PointSet([(0.0, 0.0), (1.0, 0.0), (0.2, 0.9)])
    g = greedy_orient(ps, 0.0, [exact_min_triangle(ps, 0, 1)])
    assert g.edges() == [(0, 1), (1, 2), (2, 0)]
    apsp = floyd_warshall_apsp(g.length_matrix(distance_matrix(ps)))
    perimeter = exact_min_triangle(ps, 0, 1).perimeter
    for p, q in itertools.combinations(range(3), 2):
        assert apsp[p, q] + apsp[q, p] == pytest.approx(perimeter, rel=ROUNDING)


def test_fresh_triangle_with_descending_anchors_uses_backward_cycle():
    g = greedy_orient(FOUR_POINTS, 0.0, [TriangleTriple(2, 1, 0, 1.0)])
    assert g.edges() == [(0, 1), (1, 2), (2, 0)]


def test_completed_skipped_and_fallback_edges():
    triples = [
        TriangleTriple(0, 1, 2, 1.0),
        TriangleTriple(0, 2, 3, 2.0),
        TriangleTriple(1, 2, 3, 3.0),
        TriangleTriple(0, 1, 2, 4.0),
    ]
    g, stats = greedy_orient_with_stats(FOUR_POINTS, 0.0, triples)
    assert g.edges() == [(0, 1), (0, 3), (1, 2), (1, 3), (2, 0), (3, 2)]
    assert (stats.fresh, stats.completed, stats.skipped, stats.fallback_edges) == (1, 1, 2, 1)


def test_equal_perimeters_keep_input_order():
    first = TriangleTriple(0, 1, 2, 1.0)
    second = TriangleTriple(2, 3, 0, 1.0)
    assert greedy_orient(FOUR_POINTS, 0.0, [first, second]).has_edge(2, 0)
    assert greedy_orient(FOUR_POINTS, 0.0, [second, first]).has_edge(0, 2)


def test_sort_is_by_perimeter_not_input_position():
    first = TriangleTriple(0, 1, 2, 2.0)
    second = TriangleTriple(2, 3, 0, 1.0)
    assert greedy_orient(FOUR_POINTS, 0.0, [first, second]).has_edge(0, 2)


def test_invalid_triangle_lists():
    with pytest.raises(UsageError):
        greedy_orient(FOUR_POINTS, 0.0, [(0, 1, 2)])
    with pytest.raises(UsageError):
        greedy_orient(FOUR_POINTS, 0.0, [TriangleTriple(0, 1, 7, 1.0)])
    with pytest.raises(UsageError):
        greedy_orient(FOUR_POINTS, -0.1, [])


def test_two_triangles_sharing_an_edge():
    ps = PointSet([(0.0, 0.0), (1.0, 0.0), (0.5, 0.8), (0.5, -0.9)])
    triples = [exact_min_triangle(ps, 0, 1), TriangleTriple.from_points(ps, 1, 3, 0)]
    g = greedy_orient(ps, 0.1, triples)
    assert validate_oriented_graph(g) == []
    apsp = floyd_warshall_apsp(g.length_matrix(distance_matrix(ps)))
    for triple in triples:
        walk = apsp[triple.p, triple.q] + apsp[triple.q, triple.p]
        assert walk <= 2.2 * exact_min_triangle(ps, triple.p, triple.q).perimeter * (1 + ROUNDING)


@pytest.mark.parametrize("seed", range(5))
def test_anchor_pairs_within_bound(seed):
    rng = np.random.default_rng(seed)
    ps = PointSet(rng.random((60, 2)))
    eps1 = 1.0
    cfg = TriangleQueryConfig.from_eps1(eps1, 2)
    index = build_ann_index(ps)
    pairs = [tuple(int(i) for i in rng.choice(60, size=2, replace=False)) for _ in range(80)]
    triples = [approx_min_triangle(index, ps, p, q, cfg) for p, q in pairs]

    g = greedy_orient(ps, eps1, triples)
    assert all(not g.has_edge(v, u) for u, v in g.edges())
    apsp = floyd_warshall_apsp(g.length_matrix(distance_matrix(ps)))
    for triple in triples:
        walk = apsp[triple.p, triple.q] + apsp[triple.q, triple.p]
        optimum = exact_min_triangle(ps, triple.p, triple.q).perimeter
        assert walk <= (2 + 2 * eps1) * optimum * (1 + ROUNDING)
