import math
from dataclasses import dataclass

import numpy as np

from core_geometry.errors import InputValidationError, NoTriangleError, UsageError

# --- Point Set Types ---

class PointSet:
    """
    Indexed, immutable set of distinct points in R^d.

    Points are stored row-wise in a read-only float64 array of shape (n, d).
    Indices 0..n-1 never change for the lifetime of the set.
    """

    def __init__(self, rows, dimension=None):
        coords = np.asarray(rows, dtype=np.float64)
        if coords.ndim == 1 and coords.size == 0:
            coords = coords.reshape(0, dimension or 1)
        if coords.ndim != 2:
            raise InputValidationError(f"expected a 2-d array of coordinates, got shape {coords.shape}")
        if dimension is not None and coords.shape[1] != dimension:
            raise InputValidationError(f"expected dimension {dimension}, got {coords.shape[1]}")
        if coords.shape[1] < 1:
            raise InputValidationError("dimension must be at least 1")
        if not np.all(np.isfinite(coords)):
            bad = int(np.argmax(~np.all(np.isfinite(coords), axis=1)))
            raise InputValidationError(f"point {bad} has a non-finite coordinate")
        if len(coords) > 1 and len(np.unique(coords, axis=0)) != len(coords):
            raise InputValidationError("point set contains duplicate points")

        coords = np.ascontiguousarray(coords)
        coords.flags.writeable = False
        self._coords = coords

    @property
    def coords(self):
        return self._coords

    @property
    def dimension(self):
        return self._coords.shape[1]

    def __len__(self):
        return self._coords.shape[0]

    def __getitem__(self, index):
        """Returns point `index` as a tuple of floats."""
        return tuple(float(c) for c in self._coords[index])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._coords.shape == other._coords.shape and np.array_equal(self._coords, other._coords)

    def __repr__(self):
        return f"PointSet(n={len(self)}, dimension={self.dimension})"

    def check_index(self, index):
        if not 0 <= index < len(self):
            raise UsageError(f"point index {index} out of range for {len(self)} points")


@dataclass(frozen=True)
class TriangleTriple:
    """
    Ordered triple (p, q; r) of point indices with its cached perimeter.

    p and q are the anchor pair; r is the third point chosen for them.
    """
    p: int
    q: int
    r: int
    perimeter: float

    def __post_init__(self):
        if len({self.p, self.q, self.r}) != 3:
            raise UsageError(f"triangle vertices must be pairwise distinct, got ({self.p}, {self.q}; {self.r})")
        if self.perimeter < 0:
            raise UsageError(f"perimeter must be nonnegative, got {self.perimeter}")

    @classmethod
    def from_points(cls, ps, p, q, r):
        return cls(p, q, r, triangle_perimeter(ps[p], ps[q], ps[r]))

    @property
    def edges(self):
        """The three undirected edges, each as a sorted index pair."""
        return (
            _sorted_pair(self.p, self.q),
            _sorted_pair(self.q, self.r),
            _sorted_pair(self.r, self.p),
        )

    def perimeter_matches(self, ps):
        """True when the cached perimeter agrees with a recomputation up to ULP-scaled tolerance."""
        recomputed = triangle_perimeter(ps[self.p], ps[self.q], ps[self.r])
        return abs(recomputed - self.perimeter) <= 4 * math.ulp(max(recomputed, self.perimeter))


def _sorted_pair(a, b):
    return (a, b) if a < b else (b, a)

# --- Metric Functions ---

def distance(a, b):
    """
    Euclidean distance between two points.

    Args:
        a, b: Sequences of d real coordinates.

    Returns:
        float: The distance |ab|.
    """
    if len(a) != len(b):
        raise UsageError(f"dimension mismatch: {len(a)} vs {len(b)}")
    total = 0.0
    for x, y in zip(a, b):
        diff = float(x) - float(y)
        total += diff * diff
    return math.sqrt(total)


def triangle_perimeter(a, b, c):
    """Perimeter |ab| + |bc| + |ca| of the (possibly degenerate) triangle abc."""
    return distance(a, b) + distance(b, c) + distance(c, a)


def distances_from(ps, index):
    """
    Distances from point `index` to every point of the set, as a numpy vector.

    Uses the same summation order as `distance`, so entries are bit-identical
    to the scalar function.
    """
    diff = ps.coords - ps.coords[index]
    return np.sqrt(np.sum(diff * diff, axis=1))


def distance_matrix(ps):
    """Full n x n Euclidean distance matrix of a point set."""
    n = len(ps)
    matrix = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        matrix[i] = distances_from(ps, i)
    return matrix


def focal_distance_sums(ps, p, q):
    """
    |px| + |qx| for every point x of the set.

    This is the ellipse condition with foci p and q: the points with the smallest
    sum lie on the smallest ellipse around p and q that touches the set.
    """
    return distances_from(ps, p) + distances_from(ps, q)

# --- Minimum-Perimeter Triangle ---

def exact_min_triangle(ps, p, q):
    """
    Minimum-perimeter triangle containing p and q, by a linear scan.

    Args:
        ps (PointSet): The point set.
        p, q (int): Distinct anchor indices.

    Returns:
        TriangleTriple: (p, q; x) with x minimising |px| + |qx| over all other
        points. Ties go to the smallest index x.
    """
    n = len(ps)
    if n < 3:
        raise NoTriangleError(n)
    ps.check_index(p)
    ps.check_index(q)
    if p == q:
        raise UsageError(f"query points must differ, got p = q = {p}")

    sums = focal_distance_sums(ps, p, q)
    sums[p] = np.inf
    sums[q] = np.inf
    # argmin returns the first minimum, i.e. the smallest index on ties
    x = int(np.argmin(sums))
    return TriangleTriple.from_points(ps, p, q, x)
