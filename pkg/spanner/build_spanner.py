"""
Sparse oriented (2+eps)-spanner construction.

Pipeline:
1. s-WSPD of the point set (fair split tree).
2. ANN index over all points.
3. For every pair, pick up to two points per side and approximate the
   minimum triangle of every unordered pair of picked points.
4. Greedy orientation of the collected triangle list.
"""

import itertools
import logging
import time
from dataclasses import dataclass, field

from core_geometry.errors import InvariantViolation, UsageError
from core_geometry.geometry import exact_min_triangle
from min_triangle.triangle_query import (
    DEFAULT_MAX_GRID_CELLS,
    TriangleQueryConfig,
    TriangleQueryStats,
    approx_min_triangle,
)
from orientation.greedy_orientation import fallback_direction, greedy_orient, greedy_orient_with_stats
from orientation.oriented_graph import OrientedGraph
from spatial_index.ann_index import build_ann_index
from spatial_index.split_tree import build_split_tree
from spatial_index.wspd import compute_wspd, pick_representatives

# --- Configuration ---

THEOREM_MODE = "theorem-defaults"
PRACTICAL_MODE = "practical"
CUSTOM_MODE = "custom"

PRACTICAL_S = 4.0
PRACTICAL_EPS1 = 0.1

TRIANGLE_METHODS = ("grid", "scan")


@dataclass(frozen=True)
class SpannerConfig:
    """
    Parameters of the spanner construction.

    Use `theorem_defaults(eps)` for the proven (2+eps) guarantee
    (eps1 = eps/4, s = 96/eps). `practical(eps)` and `custom(...)` trade the
    guarantee for speed and are labelled as such in reports.
    """
    eps: float
    eps1: float
    s: float
    mode: str = THEOREM_MODE
    triangle_method: str = "grid"
    max_grid_cells: int = DEFAULT_MAX_GRID_CELLS
    alpha: float = None

    def __post_init__(self):
        if not 0 < self.eps < 2:
            raise UsageError(f"eps must lie in (0, 2), got {self.eps}")
        if not 0 < self.eps1 < 2:
            raise UsageError(f"eps1 must lie in (0, 2), got {self.eps1}")
        if not self.s > 0:
            raise UsageError(f"s must be positive, got {self.s}")
        if self.triangle_method not in TRIANGLE_METHODS:
            raise UsageError(f"triangle_method must be one of {TRIANGLE_METHODS}, got {self.triangle_method!r}")
        if self.mode == THEOREM_MODE and (self.eps1 != self.eps / 4 or self.s != 96 / self.eps or self.alpha is not None):
            raise UsageError("theorem-defaults mode does not allow overriding eps1, s or alpha")

    @classmethod
    def theorem_defaults(cls, eps, triangle_method="grid", max_grid_cells=DEFAULT_MAX_GRID_CELLS):
        return cls(eps=eps, eps1=eps / 4, s=96 / eps, mode=THEOREM_MODE,
                   triangle_method=triangle_method, max_grid_cells=max_grid_cells)

    @classmethod
    def practical(cls, eps):
        return cls(eps=eps, eps1=PRACTICAL_EPS1, s=PRACTICAL_S, mode=PRACTICAL_MODE, triangle_method="scan")

    @classmethod
    def custom(cls, eps, eps1=None, s=None, alpha=None, triangle_method="grid", max_grid_cells=DEFAULT_MAX_GRID_CELLS):
        if eps1 is None and s is None and alpha is None:
            return cls.theorem_defaults(eps, triangle_method, max_grid_cells)
        logging.warning("Custom spanner constants in use: the (2+eps) dilation bound is not guaranteed.")
        return cls(
            eps=eps,
            eps1=eps / 4 if eps1 is None else eps1,
            s=96 / eps if s is None else s,
            mode=CUSTOM_MODE,
            triangle_method=triangle_method,
            max_grid_cells=max_grid_cells,
            alpha=alpha,
        )

    @property
    def guaranteed(self):
        return self.mode == THEOREM_MODE

    def as_dict(self):
        return {
            'eps': self.eps,
            'eps1': self.eps1,
            's': self.s,
            'mode': self.mode,
            'triangle_method': self.triangle_method,
            'alpha': self.alpha,
        }


@dataclass
class SpannerStats:
    wspd_pair_count: int = 0
    triple_count: int = 0
    edge_count: int = 0
    dilation_defined: bool = True
    phase_seconds: dict = field(default_factory=dict)
    triangle_queries: TriangleQueryStats = field(default_factory=TriangleQueryStats)
    triples: list = field(default_factory=list, repr=False)

    def as_dict(self):
        """Deterministic fields only; timings are reported separately."""
        return {
            'wspd_pair_count': self.wspd_pair_count,
            'triple_count': self.triple_count,
            'edge_count': self.edge_count,
            'dilation_defined': self.dilation_defined,
            'triangle_queries': {
                'calls': self.triangle_queries.calls,
                'case1': self.triangle_queries.case1,
                'case2_grid': self.triangle_queries.case2_grid,
                'case2_scan': self.triangle_queries.case2_scan,
            },
        }

    def check_invariants(self):
        if self.edge_count > 3 * self.triple_count:
            raise InvariantViolation(f"edge count {self.edge_count} exceeds 3 * |L| = {3 * self.triple_count}")
        if self.triple_count > 6 * self.wspd_pair_count:
            raise InvariantViolation(f"|L| = {self.triple_count} exceeds 6 * m = {6 * self.wspd_pair_count}")

# --- Construction ---

def collect_triangle_list(ps, cfg, stats):
    """
    Steps 1-3 of the construction: WSPD, ANN index and the triangle list L.

    Returns:
        list[TriangleTriple]: One triple per unordered pair of picked points, per WSPD pair.
    """
    started = time.perf_counter()
    pairs = compute_wspd(build_split_tree(ps), cfg.s)
    stats.wspd_pair_count = len(pairs)
    stats.phase_seconds['wspd'] = time.perf_counter() - started
    logging.info(f"WSPD with s={cfg.s:.4g} has {len(pairs)} pairs for {len(ps)} points.")

    started = time.perf_counter()
    index = build_ann_index(ps) if cfg.triangle_method == "grid" else None
    query_cfg = TriangleQueryConfig.from_eps1(cfg.eps1, ps.dimension, alpha=cfg.alpha, max_grid_cells=cfg.max_grid_cells)
    stats.phase_seconds['ann_index'] = time.perf_counter() - started

    started = time.perf_counter()
    cache = {}
    triples = []
    for pair in pairs:
        a_picks, b_picks = pick_representatives(pair)
        picked = sorted(set(a_picks) | set(b_picks))
        for p, q in itertools.combinations(picked, 2):
            triple = cache.get((p, q))
            if triple is None:
                if index is None:
                    triple = exact_min_triangle(ps, p, q)
                    stats.triangle_queries.calls += 1
                    stats.triangle_queries.case2_scan += 1
                else:
                    triple = approx_min_triangle(index, ps, p, q, query_cfg, stats.triangle_queries)
                cache[(p, q)] = triple
            triples.append(triple)
    stats.triple_count = len(triples)
    stats.phase_seconds['triangles'] = time.perf_counter() - started
    logging.info(f"Collected {len(triples)} triangles ({len(cache)} distinct anchor pairs).")
    return triples


def build_oriented_spanner(ps, cfg):
    """
    Builds a sparse oriented spanner.

    Args:
        ps (PointSet): At least two points.
        cfg (SpannerConfig): Construction parameters.

    Returns:
        tuple: (OrientedGraph, SpannerStats). With theorem defaults the graph
        has oriented dilation at most 2+eps.
    """
    n = len(ps)
    if n < 2:
        raise UsageError(f"a spanner needs at least 2 points, got {n}")

    stats = SpannerStats()
    if n == 2:
        logging.warning("Two points admit no triangle: emitting a single edge, dilation is undefined.")
        graph = OrientedGraph(2, [fallback_direction(0, 1)])
        stats.wspd_pair_count = 1
        stats.edge_count = 1
        stats.dilation_defined = False
        return graph, stats

    triples = collect_triangle_list(ps, cfg, stats)

    started = time.perf_counter()
    graph, orientation_stats = greedy_orient_with_stats(ps, cfg.eps1, triples)
    stats.phase_seconds['orientation'] = time.perf_counter() - started
    stats.edge_count = graph.number_of_edges()
    stats.triples = triples
    stats.check_invariants()

    logging.info(
        f"Built oriented spanner ({cfg.mode}): {n} points, {stats.edge_count} edges "
        f"({stats.edge_count / n:.2f} per point), {orientation_stats.skipped} triangles skipped."
    )
    return graph, stats


def greedy_complete_spanner(ps):
    """
    Dense baseline: greedy orientation over the exact minimum triangle of every
    point pair, which yields an oriented 2-spanner with up to n(n-1)/2 edges.
    """
    n = len(ps)
    if n < 3:
        raise UsageError(f"the complete greedy baseline needs at least 3 points, got {n}")
    triples = [exact_min_triangle(ps, p, q) for p, q in itertools.combinations(range(n), 2)]
    return greedy_orient(ps, 0.0, triples)
