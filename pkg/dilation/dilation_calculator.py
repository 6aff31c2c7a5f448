"""
Oriented dilation of an oriented graph.

The dilation of a pair (p, q) is the length of the shortest closed walk through
p and q, d(p, q) + d(q, p), divided by the perimeter of the smallest triangle
containing p and q. The dilation of the graph is the maximum over all pairs.

Two ways to get it:
- exact_oriented_dilation: Floyd-Warshall plus a naive minimum-triangle table, O(n^3).
- approx_oriented_dilation: only the pairs sampled from a WSPD, with a
  pluggable shortest-path oracle and approximate minimum triangles.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core_geometry.errors import DilationUndefinedError, InvariantViolation, UsageError
from core_geometry.geometry import distance_matrix, exact_min_triangle
from min_triangle.triangle_query import DEFAULT_MAX_GRID_CELLS, TriangleQueryConfig, TriangleQueryStats, approx_min_triangle
from spatial_index.ann_index import build_ann_index
from spatial_index.split_tree import build_split_tree
from spatial_index.wspd import compute_wspd, pick_representatives

EXACT_MODE = "exact"
APPROXIMATE_MODE = "approximate"

# slack for the value >= 1 sanity floor, absorbs summation-order round-off
DILATION_FLOOR_TOLERANCE = 1e-9

# derived eps1 = eps/2 is capped here so the triangle query stays valid
MAX_DERIVED_EPS1 = 1.0

# --- Reports ---

@dataclass
class DilationReport:
    """
    Result of a dilation computation.

    value is math.inf when some pair has no closed walk. In approximate mode
    the WSPD fields name the pair and picked representatives that produced
    the maximum; they stay None when the running floor of 1 was never beaten.
    """
    value: float
    p: int = None
    q: int = None
    walk_length: float = None
    triangle_perimeter: float = None
    third: int = None
    mode: str = EXACT_MODE
    wspd_pair: tuple = None
    representatives: tuple = None
    sampled_pairs: int = None
    oracle_factor: float = None

    @property
    def unbounded(self):
        return math.isinf(self.value)

    def as_dict(self):
        """JSON-ready view; infinite lengths become the string "unbounded"."""
        data = {
            'mode': self.mode,
            'value': _finite_or_unbounded(self.value),
            'witness': None if self.p is None else [self.p, self.q],
            'walk_length': _finite_or_unbounded(self.walk_length),
            'triangle_perimeter': self.triangle_perimeter,
            'third': self.third,
        }
        if self.mode == APPROXIMATE_MODE:
            data['wspd_pair'] = None if self.wspd_pair is None else list(self.wspd_pair)
            data['representatives'] = None if self.representatives is None else [list(side) for side in self.representatives]
            data['sampled_pairs'] = self.sampled_pairs
            data['oracle_factor'] = self.oracle_factor
        return data


def _finite_or_unbounded(value):
    if value is None:
        return None
    return "unbounded" if math.isinf(value) else float(value)

# --- Shortest Paths ---

def floyd_warshall_apsp(lengths):
    """
    All-pairs shortest directed path lengths.

    Args:
        lengths (np.ndarray): n x n matrix, lengths[u, v] the edge length u -> v,
            inf where there is no edge and 0 on the diagonal.

    Returns:
        np.ndarray: n x n matrix of shortest path lengths (inf when unreachable).
    """
    distances = np.array(lengths, dtype=np.float64, copy=True)
    if distances.ndim != 2 or distances.shape[0] != distances.shape[1]:
        raise UsageError(f"length matrix must be square, got shape {distances.shape}")
    if np.any(distances < 0):
        raise UsageError("edge lengths must be nonnegative")
    for k in range(distances.shape[0]):
        distances = np.minimum(distances, distances[:, k][:, np.newaxis] + distances[k, :][np.newaxis, :])
    return distances


def closed_walk_length(apsp, p, q):
    """Length d(p, q) + d(q, p) of the shortest closed walk through p and q."""
    return float(apsp[p, q] + apsp[q, p])

# --- Exact Dilation ---

def _min_triangle_table(lengths):
    """
    Minimum-triangle perimeter and third point for every ordered pair.

    Third points minimise lengths[p, x] + lengths[q, x] (smallest x on ties);
    perimeters are summed as |pq| + |qx| + |xp|.
    """
    n = lengths.shape[0]
    perimeters = np.full((n, n), np.inf)
    thirds = np.full((n, n), -1, dtype=np.int64)
    rows = np.arange(n)
    for p in range(n):
        # sums[q, x] = |px| + |qx|
        sums = lengths[p][np.newaxis, :] + lengths
        sums[:, p] = np.inf
        np.fill_diagonal(sums, np.inf)
        x = np.argmin(sums, axis=1)
        thirds[p] = x
        perimeters[p] = lengths[p, rows] + lengths[rows, x] + lengths[x, p]
    perimeters[rows, rows] = np.inf
    return perimeters, thirds


def _exact_dilation(lengths, g):
    n = lengths.shape[0]
    if n < 3:
        raise DilationUndefinedError(n)
    if g.n != n:
        raise UsageError(f"graph has {g.n} vertices but there are {n} points")

    apsp = floyd_warshall_apsp(g.length_matrix(lengths))
    walks = apsp + apsp.T
    perimeters, thirds = _min_triangle_table(lengths)

    upper_p, upper_q = np.triu_indices(n, k=1)
    ratios = walks[upper_p, upper_q] / perimeters[upper_p, upper_q]
    # argmax keeps the first maximum, i.e. the lexicographically smallest pair
    best = int(np.argmax(ratios))
    p, q = int(upper_p[best]), int(upper_q[best])
    report = DilationReport(
        value=float(ratios[best]),
        p=p,
        q=q,
        walk_length=closed_walk_length(apsp, p, q),
        triangle_perimeter=float(perimeters[p, q]),
        third=int(thirds[p, q]),
        mode=EXACT_MODE,
    )
    if report.value < 1 - DILATION_FLOOR_TOLERANCE:
        raise InvariantViolation(f"oriented dilation {report.value} below 1 at pair ({p}, {q})")

    unreachable = int(np.sum(np.isinf(ratios)))
    if unreachable:
        logging.warning(f"{unreachable} point pair(s) lie on no closed walk: dilation is unbounded.")
    logging.info(f"Exact oriented dilation {report.value:.6g} at pair ({p}, {q}) over {len(ratios)} pairs.")
    return report


def exact_oriented_dilation(ps, g):
    """
    Exact oriented dilation of `g` over the Euclidean point set `ps`, in O(n^3) time.

    Returns:
        DilationReport: value with its witness pair, closed-walk length and
        minimum-triangle perimeter.
    """
    if len(ps) < 3:
        raise DilationUndefinedError(len(ps))
    return _exact_dilation(distance_matrix(ps), g)


def exact_oriented_dilation_metric(matrix, g):
    """
    Exact oriented dilation of `g` where edge lengths and triangles come from a
    validated symmetric metric matrix instead of point coordinates.
    """
    lengths = np.asarray(matrix, dtype=np.float64)
    if lengths.ndim != 2 or lengths.shape[0] != lengths.shape[1]:
        raise UsageError(f"metric matrix must be square, got shape {lengths.shape}")
    return _exact_dilation(lengths, g)

# --- Approximate Dilation ---

@dataclass(frozen=True)
class ApproxDilationConfig:
    """
    Constants of the WSPD-based approximation. `from_eps` derives
    eps1 = eps/2 and s = 28/eps, which give the (1-eps) lower bound.
    From eps = 2 on, eps1 stays at 1: the lower bound is vacuous there and
    the triangle query needs eps1 < 2.
    """
    eps: float
    eps1: float
    s: float
    triangle_method: str = "grid"
    max_grid_cells: int = DEFAULT_MAX_GRID_CELLS
    overridden: bool = False

    def __post_init__(self):
        if not self.eps > 0:
            raise UsageError(f"eps must be positive, got {self.eps}")
        if not 0 < self.eps1 < 2:
            raise UsageError(f"eps1 must lie in (0, 2), got {self.eps1}")
        if not self.s > 0:
            raise UsageError(f"s must be positive, got {self.s}")
        if self.triangle_method not in ("grid", "scan"):
            raise UsageError(f"triangle_method must be 'grid' or 'scan', got {self.triangle_method!r}")

    @classmethod
    def from_eps(cls, eps, eps1=None, s=None, triangle_method="grid", max_grid_cells=DEFAULT_MAX_GRID_CELLS):
        overridden = eps1 is not None or s is not None
        if overridden:
            logging.warning("Custom dilation constants in use: the (1-eps) lower bound is not guaranteed.")
        return cls(
            eps=eps,
            eps1=min(eps / 2, MAX_DERIVED_EPS1) if eps1 is None else eps1,
            s=28 / eps if s is None else s,
            triangle_method=triangle_method,
            max_grid_cells=max_grid_cells,
            overridden=overridden,
        )

    def as_dict(self):
        return {'eps': self.eps, 'eps1': self.eps1, 's': self.s, 'triangle_method': self.triangle_method}


def approx_oriented_dilation(ps, g, eps, oracle, cfg=None):
    """
    Approximate oriented dilation from WSPD-sampled pairs.

    For every well-separated pair, up to two representatives are picked per
    side and every cross pair (a, b) is measured: the oracle gives both
    directed distances, the minimum triangle of (a, b) is approximated, and
    the largest ratio wins. The running maximum starts at 1.

    Args:
        ps (PointSet): At least three points.
        g (OrientedGraph): Graph on the same vertex set.
        eps (float): Target accuracy, positive. Values >= 1 keep only the upper bound.
        oracle (DistanceOracle): k-approximate directed distances.
        cfg (ApproxDilationConfig, optional): Defaults to `from_eps(eps)`.

    Returns:
        DilationReport: value within [(1-eps) odil(g), k odil(g)], or math.inf as
        soon as a sampled pair has no closed walk.
    """
    n = len(ps)
    if n < 3:
        raise DilationUndefinedError(n)
    if g.n != n:
        raise UsageError(f"graph has {g.n} vertices but the point set has {n} points")
    if cfg is None:
        cfg = ApproxDilationConfig.from_eps(eps)
    elif cfg.eps != eps:
        raise UsageError(f"eps {eps} does not match the config's eps {cfg.eps}")

    pairs = compute_wspd(build_split_tree(ps), cfg.s)
    logging.info(f"Approximate dilation: WSPD with s={cfg.s:.4g} has {len(pairs)} pairs.")
    index = build_ann_index(ps) if cfg.triangle_method == "grid" else None
    query_cfg = TriangleQueryConfig.from_eps1(cfg.eps1, ps.dimension, max_grid_cells=cfg.max_grid_cells)
    query_stats = TriangleQueryStats()
    triangles = {}

    report = DilationReport(value=1.0, mode=APPROXIMATE_MODE, sampled_pairs=0, oracle_factor=oracle.factor)
    for pair_number, pair in enumerate(pairs):
        a_picks, b_picks = pick_representatives(pair)
        for a in a_picks:
            for b in b_picks:
                report.sampled_pairs += 1
                forward = oracle.distance(a, b)
                backward = oracle.distance(b, a)
                key = (a, b) if a < b else (b, a)
                triangle = triangles.get(key)
                if triangle is None:
                    if index is None:
                        triangle = exact_min_triangle(ps, *key)
                    else:
                        triangle = approx_min_triangle(index, ps, key[0], key[1], query_cfg, query_stats)
                    triangles[key] = triangle
                walk = forward + backward
                ratio = walk / triangle.perimeter
                if ratio > report.value:
                    report.value = ratio
                    report.p, report.q = a, b
                    report.walk_length = walk
                    report.triangle_perimeter = triangle.perimeter
                    report.third = triangle.r
                    report.wspd_pair = (pair.a_node, pair.b_node)
                    report.representatives = (a_picks, b_picks)
                if math.isinf(ratio):
                    logging.warning(f"Points {a} and {b} lie on no closed walk: dilation is unbounded.")
                    return report

    if report.sampled_pairs > 4 * len(pairs):
        raise InvariantViolation(f"{report.sampled_pairs} sampled pairs exceed 4 * m = {4 * len(pairs)}")
    logging.info(
        f"Approximate oriented dilation {report.value:.6g} from {report.sampled_pairs} sampled pairs "
        f"({query_stats.calls} triangle queries, oracle factor {oracle.factor:g})."
    )
    return report
