"""
Dynamic approximate nearest neighbour index over a mutable subset of a PointSet.

A static scipy cKDTree is built over a base set of point indices. Deletions are
lazy (a tombstone mask); points inserted that are not in the base set go into
a small overflow buffer that is scanned linearly. The tree is rebuilt over the
current members once tombstones exceed half the base set or the overflow
grows past half of it.
"""

import logging

import numpy as np
from scipy.spatial import cKDTree

from core_geometry.errors import EmptyIndexError, UsageError

MIN_OVERFLOW_BEFORE_REBUILD = 32


class AnnIndex:
    """
    Approximate nearest neighbour index with insert and delete.

    Queries return point indices of the underlying PointSet. While no base
    point is tombstoned the tree is queried with scipy's (1+eps) search;
    while tombstones exist the tree is asked for (tombstones + 1) exact
    neighbours and the first live one is kept, which meets any eps >= 0.
    """

    def __init__(self, points, members=None):
        self.points = points
        if members is None:
            members = range(len(points))
        self._member = np.zeros(len(points), dtype=bool)
        for index in members:
            points.check_index(index)
            self._member[index] = True
        self.rebuild_count = 0
        self._rebuild()

    # --- Membership ---

    def __len__(self):
        return int(self._member.sum())

    def __contains__(self, index):
        return 0 <= index < len(self._member) and bool(self._member[index])

    def members(self):
        return set(int(i) for i in np.flatnonzero(self._member))

    def member_indices(self):
        """Sorted numpy array of member point indices."""
        return np.flatnonzero(self._member)

    def insert(self, index):
        self.points.check_index(index)
        if self._member[index]:
            raise UsageError(f"point {index} is already in the index")
        self._member[index] = True
        slot = self._base_slot.get(index)
        if slot is not None:
            self._tombstoned[slot] = False
            self._tombstone_count -= 1
        else:
            self._overflow.append(index)
            if len(self._overflow) > max(MIN_OVERFLOW_BEFORE_REBUILD, len(self._base) // 2):
                self._rebuild()

    def delete(self, index):
        self.points.check_index(index)
        if not self._member[index]:
            raise UsageError(f"point {index} is not in the index")
        self._member[index] = False
        slot = self._base_slot.get(index)
        if slot is not None:
            self._tombstoned[slot] = True
            self._tombstone_count += 1
            if self._tombstone_count * 2 > len(self._base):
                self._rebuild()
        else:
            self._overflow.remove(index)

    def _rebuild(self):
        self._base = np.flatnonzero(self._member)
        self._base_slot = {int(index): slot for slot, index in enumerate(self._base)}
        self._tombstoned = np.zeros(len(self._base), dtype=bool)
        self._tombstone_count = 0
        self._overflow = []
        self._tree = cKDTree(self.points.coords[self._base]) if len(self._base) else None
        self.rebuild_count += 1
        logging.debug(f"Rebuilt ANN index over {len(self._base)} members.")

    # --- Queries ---

    def query(self, q, eps=0.0):
        """
        (1+eps)-approximate nearest member of a single query point.

        Args:
            q: Query coordinates (length d).
            eps (float): Approximation slack, eps >= 0.

        Returns:
            int: Point index of the returned member.
        """
        return int(self.query_many(np.asarray(q, dtype=np.float64).reshape(1, -1), eps)[0])

    def query_many(self, queries, eps=0.0):
        """
        Batched form of `query`.

        Args:
            queries (np.ndarray): Array of shape (m, d).
            eps (float): Approximation slack, eps >= 0.

        Returns:
            np.ndarray: m point indices.
        """
        if eps < 0:
            raise UsageError(f"eps must be nonnegative, got {eps}")
        if not self._member.any():
            raise EmptyIndexError()
        queries = np.asarray(queries, dtype=np.float64)
        if queries.ndim != 2 or queries.shape[1] != self.points.dimension:
            raise UsageError(f"query dimension mismatch: expected {self.points.dimension}, got shape {queries.shape}")

        m = len(queries)
        best_index = np.full(m, -1, dtype=np.int64)
        best_dist = np.full(m, np.inf)

        live_in_tree = len(self._base) - self._tombstone_count
        if live_in_tree > 0:
            if self._tombstone_count == 0:
                dist, slot = self._tree.query(queries, k=1, eps=eps)
                best_dist = np.asarray(dist, dtype=np.float64).reshape(m)
                best_index = self._base[np.asarray(slot).reshape(m)]
            else:
                k = min(self._tombstone_count + 1, len(self._base))
                dist, slot = self._tree.query(queries, k=k)
                dist = np.asarray(dist).reshape(m, k)
                slot = np.asarray(slot).reshape(m, k)
                live = ~self._tombstoned[slot]
                # first live column per row; rows are sorted by distance
                first = np.argmax(live, axis=1)
                rows = np.arange(m)
                best_dist = dist[rows, first]
                best_index = self._base[slot[rows, first]]

        if self._overflow:
            extra = np.asarray(self._overflow)
            diff = queries[:, None, :] - self.points.coords[extra][None, :, :]
            extra_dist = np.sqrt(np.sum(diff * diff, axis=2))
            closest = np.argmin(extra_dist, axis=1)
            closest_dist = extra_dist[np.arange(m), closest]
            better = closest_dist < best_dist
            best_dist = np.where(better, closest_dist, best_dist)
            best_index = np.where(better, extra[closest], best_index)

        return best_index


def build_ann_index(ps):
    """Builds an ANN index containing every point of `ps`."""
    return AnnIndex(ps)


def ann_query(index, q, eps=0.0):
    """Returns the index of a (1+eps)-approximate nearest member of `index` to `q`."""
    return index.query(q, eps)


def ann_insert(index, point_index):
    index.insert(point_index)
    return index


def ann_delete(index, point_index):
    index.delete(point_index)
    return index
