import itertools
import logging
import math

import numpy as np
import pytest

from core_geometry.errors import DilationUndefinedError, UsageError
from core_geometry.geometry import PointSet, distance, distance_matrix, exact_min_triangle
from dilation.dilation_calculator import (
    ApproxDilationConfig,
    approx_oriented_dilation,
    closed_walk_length,
    exact_oriented_dilation,
    exact_oriented_dilation_metric,
    floyd_warshall_apsp,
)
from dilation.distance_oracles import DijkstraOracle, InflatedOracle, dijkstra_oracle
from orientation.oriented_graph import OrientedGraph, closed_walk_coverage
from spanner.build_spanner import SpannerConfig, build_oriented_spanner
from spatial_index.split_tree import build_split_tree
from spatial_index.wspd import compute_wspd

# slack for comparing two float computations of the same quantity
ROUNDING = 1e-12

TRIANGLE = PointSet([(0.0, 0.0), (1.0, 0.0), (0.3, 0.8)])
CYCLE = OrientedGraph(3, [(0, 1), (1, 2), (2, 0)])
PATH = OrientedGraph(3, [(0, 1), (1, 2)])


def uniform_points(seed, n, d=2):
    return PointSet(np.random.default_rng(seed).random((n, d)))


def strongly_connected_tournament(rng, n):
    """Random orientation of the complete graph, redrawn until every pair lies on a closed walk."""
    while True:
        edges = [(u, v) if rng.random() < 0.5 else (v, u) for u, v in itertools.combinations(range(n), 2)]
        g = OrientedGraph(n, edges)
        if closed_walk_coverage(g):
            return g


def apsp_of(ps, g):
    return floyd_warshall_apsp(g.length_matrix(distance_matrix(ps)))

# --- Shortest Paths ---

def test_closed_walk_length_on_cycle():
    apsp = apsp_of(TRIANGLE, CYCLE)
    perimeter = exact_min_triangle(TRIANGLE, 0, 1).perimeter
    for p, q in itertools.combinations(range(3), 2):
        assert closed_walk_length(apsp, p, q) == pytest.approx(perimeter, rel=ROUNDING)


def test_closed_walk_length_single_edge():
    ps = PointSet([(0.0, 0.0), (1.0, 0.0)])
    apsp = apsp_of(ps, OrientedGraph(2, [(0, 1)]))
    assert apsp[0, 1] == 1.0
    assert math.isinf(closed_walk_length(apsp, 0, 1))


def test_floyd_warshall_rejects_bad_matrices():
    with pytest.raises(UsageError):
        floyd_warshall_apsp(np.zeros((2, 3)))
    with pytest.raises(UsageError):
        floyd_warshall_apsp(np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_dijkstra_oracle_on_a_path():
    oracle = dijkstra_oracle(PATH, TRIANGLE)
    expected = distance(TRIANGLE[0], TRIANGLE[1]) + distance(TRIANGLE[1], TRIANGLE[2])
    assert oracle.distance(0, 2) == pytest.approx(expected, rel=ROUNDING)
    assert math.isinf(oracle.distance(2, 0))
    assert oracle.distance(1, 1) == 0.0
    with pytest.raises(UsageError):
        oracle.distance(0, 3)


def test_dijkstra_oracle_caches_sources():
    oracle = dijkstra_oracle(CYCLE, TRIANGLE)
    for v in range(3):
        oracle.distance(0, v)
    assert oracle.sources_expanded == 1
    oracle.distance(2, 1)
    assert oracle.sources_expanded == 2


@pytest.mark.parametrize("seed", range(4))
def test_dijkstra_matches_floyd_warshall(seed):
    rng = np.random.default_rng(seed)
    ps = uniform_points(seed, 15)
    edges = [(u, v) for u, v in itertools.permutations(range(15), 2) if u < v and rng.random() < 0.3]
    g = OrientedGraph(15, [(v, u) if rng.random() < 0.5 else (u, v) for u, v in edges])
    apsp = apsp_of(ps, g)
    oracle = dijkstra_oracle(g, ps)
    for u, v in itertools.product(range(15), repeat=2):
        if math.isinf(apsp[u, v]):
            assert math.isinf(oracle.distance(u, v))
        else:
            assert oracle.distance(u, v) == pytest.approx(apsp[u, v], rel=ROUNDING)


def test_inflated_oracle():
    base = dijkstra_oracle(CYCLE, TRIANGLE)
    inflated = InflatedOracle(base, 2.0)
    assert inflated.factor == 2.0
    assert inflated.distance(0, 1) == 2.0 * base.distance(0, 1)
    assert InflatedOracle(inflated, 1.5).factor == 3.0
    assert inflated.cost_class == base.cost_class == DijkstraOracle.cost_class
    with pytest.raises(UsageError):
        InflatedOracle(base, 0.5)
    with pytest.raises(UsageError):
        DijkstraOracle(CYCLE, -np.ones((3, 3)))

# --- Exact Dilation ---

def test_exact_dilation_of_a_cycle_is_one():
    report = exact_oriented_dilation(TRIANGLE, CYCLE)
    assert report.value == pytest.approx(1.0, rel=ROUNDING)
    assert report.third in range(3)
    assert not report.unbounded


def test_exact_dilation_unreachable_pair(caplog):
    with caplog.at_level(logging.WARNING):
        report = exact_oriented_dilation(TRIANGLE, PATH)
    assert report.unbounded
    assert report.as_dict()['value'] == "unbounded"
    assert report.as_dict()['walk_length'] == "unbounded"
    assert "no closed walk" in caplog.text


def test_exact_dilation_needs_three_points():
    ps = PointSet([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(DilationUndefinedError):
        exact_oriented_dilation(ps, OrientedGraph(2, [(0, 1)]))
    with pytest.raises(UsageError):
        exact_oriented_dilation(TRIANGLE, OrientedGraph(4))


def test_four_point_best_orientation():
    sqrt3 = math.sqrt(3.0)
    ps = PointSet([(0.0, 0.0), (1.0, 0.0), (0.5, sqrt3 / 2), (0.5, sqrt3 / 6)])
    # outer triangle as a cycle, centroid entered from 0 and left towards 1 and 2
    g = OrientedGraph(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (3, 2)])
    assert exact_oriented_dilation(ps, g).value >= 2 * sqrt3 - 2 - 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_exact_witness_is_consistent(seed):
    rng = np.random.default_rng(seed)
    ps = uniform_points(200 + seed, 10)
    g = strongly_connected_tournament(rng, 10)
    report = exact_oriented_dilation(ps, g)
    apsp = apsp_of(ps, g)
    triangle = exact_min_triangle(ps, report.p, report.q)
    assert report.p < report.q
    assert report.third == triangle.r
    assert report.triangle_perimeter == pytest.approx(triangle.perimeter, rel=ROUNDING)
    assert report.walk_length == closed_walk_length(apsp, report.p, report.q)
    assert report.value == pytest.approx(report.walk_length / report.triangle_perimeter, rel=ROUNDING)
    assert report.value >= 1.0

    # no pair beats the witness
    for p, q in itertools.combinations(range(10), 2):
        ratio = closed_walk_length(apsp, p, q) / exact_min_triangle(ps, p, q).perimeter
        assert ratio <= report.value * (1 + ROUNDING)


def test_metric_variant_matches_euclidean():
    ps = uniform_points(17, 12)
    g = strongly_connected_tournament(np.random.default_rng(17), 12)
    assert exact_oriented_dilation_metric(distance_matrix(ps), g).value == exact_oriented_dilation(ps, g).value
    with pytest.raises(UsageError):
        exact_oriented_dilation_metric(np.zeros((3, 4)), g)


def test_adding_an_edge_never_increases_dilation():
    ps = uniform_points(23, 30)
    g, _ = build_oriented_spanner(ps, SpannerConfig.practical(1.0))
    before = exact_oriented_dilation(ps, g).value
    support = set(g.support())
    missing = [pair for pair in itertools.combinations(range(30), 2) if pair not in support]
    for u, v in missing[:10]:
        assert exact_oriented_dilation(ps, g.with_edge(u, v)).value <= before * (1 + ROUNDING)

# --- Approximate Dilation ---

def test_approx_config_derivation(caplog):
    cfg = ApproxDilationConfig.from_eps(0.2)
    assert cfg.eps1 == 0.1
    assert cfg.s == pytest.approx(140.0)
    assert not cfg.overridden
    with caplog.at_level(logging.WARNING):
        custom = ApproxDilationConfig.from_eps(0.2, s=10.0)
    assert custom.overridden and custom.s == 10.0
    assert "not guaranteed" in caplog.text
    wide = ApproxDilationConfig.from_eps(1.5)
    assert wide.eps1 == 0.75 and wide.s == pytest.approx(28 / 1.5)
    assert ApproxDilationConfig.from_eps(6.0).eps1 == 1.0
    for eps in (0.0, -0.5):
        with pytest.raises(UsageError):
            ApproxDilationConfig.from_eps(eps)
    with pytest.raises(UsageError):
        ApproxDilationConfig.from_eps(0.2, triangle_method="walk")


def test_approx_dilation_of_a_cycle_is_one():
    report = approx_oriented_dilation(TRIANGLE, CYCLE, 0.5, dijkstra_oracle(CYCLE, TRIANGLE))
    assert report.value == pytest.approx(1.0, rel=ROUNDING)
    assert report.mode == "approximate"
    assert report.sampled_pairs >= 1


@pytest.mark.parametrize("eps", [1.0, 1.5, 6.0])
def test_approx_dilation_accepts_large_eps(eps):
    report = approx_oriented_dilation(TRIANGLE, CYCLE, eps, dijkstra_oracle(CYCLE, TRIANGLE))
    assert report.value == pytest.approx(1.0, rel=ROUNDING)


def test_approx_dilation_unbounded():
    report = approx_oriented_dilation(TRIANGLE, PATH, 0.5, dijkstra_oracle(PATH, TRIANGLE))
    assert report.unbounded
    assert report.as_dict()['value'] == "unbounded"


def test_approx_dilation_argument_errors():
    oracle = dijkstra_oracle(CYCLE, TRIANGLE)
    with pytest.raises(UsageError):
        approx_oriented_dilation(TRIANGLE, CYCLE, 0.5, oracle, ApproxDilationConfig.from_eps(0.25))
    with pytest.raises(UsageError):
        approx_oriented_dilation(TRIANGLE, OrientedGraph(4), 0.5, oracle)
    two = PointSet([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(DilationUndefinedError):
        approx_oriented_dilation(two, OrientedGraph(2, [(0, 1)]), 0.5, oracle)


def check_sandwich(ps, g, eps, factor=1.0, triangle_method="scan"):
    exact = exact_oriented_dilation(ps, g).value
    oracle = dijkstra_oracle(g, ps)
    if factor != 1.0:
        oracle = InflatedOracle(oracle, factor)
    cfg = ApproxDilationConfig.from_eps(eps, triangle_method=triangle_method)
    report = approx_oriented_dilation(ps, g, eps, oracle, cfg)
    assert (1 - eps) * exact <= report.value * (1 + ROUNDING)
    assert report.value <= factor * exact * (1 + ROUNDING)
    assert report.oracle_factor == factor
    pair_count = len(compute_wspd(build_split_tree(ps), cfg.s))
    assert report.sampled_pairs <= 4 * pair_count
    return report


@pytest.mark.parametrize("eps", [0.1, 0.2])
@pytest.mark.parametrize("seed", range(3))
def test_approx_sandwich_on_tournaments(eps, seed):
    rng = np.random.default_rng(300 + seed)
    ps = uniform_points(300 + seed, 12)
    check_sandwich(ps, strongly_connected_tournament(rng, 12), eps)


@pytest.mark.parametrize("seed", range(3))
def test_approx_sandwich_on_spanners(seed):
    ps = uniform_points(400 + seed, 40)
    g, _ = build_oriented_spanner(ps, SpannerConfig.theorem_defaults(1.9, triangle_method="scan"))
    report = check_sandwich(ps, g, 0.2)
    if report.p is not None:
        assert report.wspd_pair is not None
        assert report.p in report.representatives[0] and report.q in report.representatives[1]


def test_approx_with_inflated_oracle():
    rng = np.random.default_rng(5)
    ps = uniform_points(5, 12)
    check_sandwich(ps, strongly_connected_tournament(rng, 12), 0.2, factor=2.0)


def test_approx_with_grid_triangles_never_overshoots():
    ps = uniform_points(6, 20)
    g = strongly_connected_tournament(np.random.default_rng(6), 20)
    cfg = ApproxDilationConfig.from_eps(0.5, eps1=1.0, s=4.0)
    report = approx_oriented_dilation(ps, g, 0.5, dijkstra_oracle(g, ps), cfg)
    assert 1.0 <= report.value <= exact_oriented_dilation(ps, g).value * (1 + ROUNDING)


@pytest.mark.slow
@pytest.mark.parametrize("n", [50, 100, 300])
@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_approx_sandwich_acceptance(n, eps):
    rng = np.random.default_rng(n)
    ps = uniform_points(n, n)
    check_sandwich(ps, strongly_connected_tournament(rng, n), eps)
    g, _ = build_oriented_spanner(ps, SpannerConfig.theorem_defaults(1.9, triangle_method="scan"))
    check_sandwich(ps, g, eps)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(2))
def test_approx_sandwich_with_grid_triangles(seed):
    ps = uniform_points(400 + seed, 50)
    g, _ = build_oriented_spanner(ps, SpannerConfig.theorem_defaults(1.9))
    report = check_sandwich(ps, g, 0.8, triangle_method="grid")
    assert report.value <= 3.9
