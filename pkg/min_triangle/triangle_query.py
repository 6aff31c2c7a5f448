import logging
import math
from dataclasses import dataclass

import numpy as np

from core_geometry.errors import NoTriangleError, UsageError
from core_geometry.geometry import TriangleTriple, distance

# --- Configuration ---

DEFAULT_MAX_GRID_CELLS = 250_000
QUERY_CHUNK_SIZE = 65_536


def _whole_cell_ratio(alpha, eps3):
    """
    Shrinks eps3 so that 3*alpha/eps3 is a whole number of cells per side.
    Cells never grow past the requested eps3 and floor(3*alpha/eps3) is exact.
    """
    if not (alpha > 0 and eps3 > 0):
        return eps3
    cells = math.ceil(3 * alpha / eps3)
    snapped = min(3 * alpha / cells, eps3)
    while 3 * alpha / snapped < cells:
        snapped = math.nextafter(snapped, 0.0)
    return snapped


@dataclass(frozen=True)
class TriangleQueryConfig:
    """
    Constants of the approximate minimum-triangle query.

    eps2 is the nearest-neighbour slack, alpha the Case 1 cut-off ratio and
    eps3 the grid cell side relative to |pq|. Build with `from_eps1` to get
    the proven derivation; overriding any derived constant voids the bound.
    """
    eps1: float
    eps2: float
    alpha: float
    eps3: float
    dimension: int
    max_grid_cells: int = DEFAULT_MAX_GRID_CELLS
    overridden: bool = False

    def __post_init__(self):
        if not 0 < self.eps1 < 2:
            raise UsageError(f"eps1 must lie in (0, 2), got {self.eps1}")
        if self.eps2 < 0 or self.eps3 <= 0:
            raise UsageError(f"eps2 must be >= 0 and eps3 > 0, got eps2={self.eps2}, eps3={self.eps3}")
        if not self.alpha > 2:
            raise UsageError(f"alpha must exceed 2, got {self.alpha}")
        if self.dimension < 1:
            raise UsageError(f"dimension must be positive, got {self.dimension}")

    @classmethod
    def from_eps1(cls, eps1, dimension, eps2=None, alpha=None, eps3=None, max_grid_cells=DEFAULT_MAX_GRID_CELLS):
        if not 0 < eps1 < 2:
            raise UsageError(f"eps1 must lie in (0, 2), got {eps1}")
        overrides = {name: value for name, value in (("eps2", eps2), ("alpha", alpha), ("eps3", eps3)) if value is not None}
        if overrides:
            logging.warning(f"Overriding derived triangle-query constants {overrides}: the (1+eps1) bound is no longer guaranteed.")
        alpha_value = 4 / eps1 if alpha is None else alpha
        return cls(
            eps1=eps1,
            eps2=eps1 / 2 if eps2 is None else eps2,
            alpha=alpha_value,
            eps3=_whole_cell_ratio(alpha_value, 2 / (3 * math.sqrt(dimension)) * eps1 if eps3 is None else eps3),
            dimension=dimension,
            max_grid_cells=max_grid_cells,
            overridden=bool(overrides),
        )

    @property
    def cells_per_side(self):
        return max(1, math.floor(3 * self.alpha / self.eps3))

    @property
    def grid_cells(self):
        return self.cells_per_side ** self.dimension

    @property
    def max_ann_queries(self):
        """
        Upper bound on index operations per call: first query, grid, two deletes
        and two inserts. At most 1 + (3*alpha/eps3)^d + 4.
        """
        return 1 + self.grid_cells + 4


@dataclass
class TriangleQueryStats:
    """Running counters over many approx_min_triangle calls."""
    calls: int = 0
    case1: int = 0
    case2_grid: int = 0
    case2_scan: int = 0
    ann_queries: int = 0
    max_operations_per_call: int = 0

# --- Query ---

def _grid_centres(centre, side, cells_per_side):
    """Row-major cell centres of the axis-aligned hypercube of the given side centred at `centre`."""
    cell = side / cells_per_side
    offsets = -side / 2 + cell * (np.arange(cells_per_side) + 0.5)
    axes = [centre[axis] + offsets for axis in range(len(centre))]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _best_candidate(ps, p, q, candidates):
    """Candidate with the smallest |px| + |qx|; the first one found wins ties."""
    coords = ps.coords
    diff_p = coords[candidates] - coords[p]
    diff_q = coords[candidates] - coords[q]
    sums = np.sqrt(np.sum(diff_p * diff_p, axis=1)) + np.sqrt(np.sum(diff_q * diff_q, axis=1))
    best = int(np.argmin(sums))
    return int(candidates[best]), float(sums[best])


def approx_min_triangle(index, ps, p, q, cfg, stats=None):
    """
    (1+eps1)-approximation of the minimum-perimeter triangle containing p and q.

    p and q are removed from the index for the duration of the query and put
    back on every exit path, so the index membership is unchanged afterwards.

    Args:
        index (AnnIndex): Index containing every point of `ps`.
        ps (PointSet): The point set.
        p, q (int): Distinct anchor indices.
        cfg (TriangleQueryConfig): Query constants.
        stats (TriangleQueryStats, optional): Counters to update.

    Returns:
        TriangleTriple: (p, q; r) with perimeter <= (1+eps1) |Delta*(p, q)|.
    """
    n = len(ps)
    if n < 3:
        raise NoTriangleError(n)
    if p == q:
        raise UsageError(f"query points must differ, got p = q = {p}")
    if p not in index or q not in index:
        raise UsageError(f"query points {p} and {q} must both be members of the index")
    if cfg.dimension != ps.dimension:
        raise UsageError(f"config dimension {cfg.dimension} does not match point dimension {ps.dimension}")

    coords = ps.coords
    pq = distance(coords[p], coords[q])
    operations = 2
    index.delete(p)
    index.delete(q)
    try:
        r = index.query(coords[p], cfg.eps2)
        operations += 1
        if distance(coords[p], coords[r]) > cfg.alpha * pq:
            case = "case1"
        elif cfg.grid_cells > cfg.max_grid_cells:
            # grid too large to enumerate: an exact scan is a 1-approximation
            members = index.member_indices()
            r, _ = _best_candidate(ps, p, q, members)
            case = "case2_scan"
        else:
            centres = _grid_centres(coords[p], 3 * cfg.alpha * pq, cfg.cells_per_side)
            best_r, best_sum = -1, math.inf
            for start in range(0, len(centres), QUERY_CHUNK_SIZE):
                chunk = centres[start:start + QUERY_CHUNK_SIZE]
                candidates = index.query_many(chunk, cfg.eps2)
                operations += len(chunk)
                # p and q are deleted, so they cannot come back; filter anyway
                candidates = candidates[(candidates != p) & (candidates != q)]
                if len(candidates) == 0:
                    continue
                chunk_r, chunk_sum = _best_candidate(ps, p, q, candidates)
                if chunk_sum < best_sum:
                    best_r, best_sum = chunk_r, chunk_sum
            # the first ANN answer is a valid fallback if every cell was filtered
            r = best_r if best_r >= 0 else r
            case = "case2_grid"
    finally:
        index.insert(p)
        index.insert(q)
        operations += 2

    if stats is not None:
        stats.calls += 1
        setattr(stats, case, getattr(stats, case) + 1)
        stats.ann_queries += operations - 4
        stats.max_operations_per_call = max(stats.max_operations_per_call, operations)

    return TriangleTriple.from_points(ps, p, q, r)
