"""
Fair split tree over a PointSet.

Every node owns a contiguous slice [start, end) of a permutation of the point
indices, the tight bounding box of those points, and a representative point.
Internal nodes split their bounding box at the midpoint of its longest side
(ties on side length go to the lowest axis).
"""

import logging
from dataclasses import dataclass

import numpy as np

from core_geometry.errors import UsageError


@dataclass(frozen=True, eq=False)
class SplitNode:
    start: int
    end: int
    lower: np.ndarray
    upper: np.ndarray
    representative: int
    left: int = -1
    right: int = -1

    @property
    def is_leaf(self):
        return self.left < 0

    @property
    def size(self):
        return self.end - self.start

    @property
    def centre(self):
        return (self.lower + self.upper) / 2.0

    @property
    def radius(self):
        """Radius of the ball circumscribing the bounding box."""
        return float(np.linalg.norm(self.upper - self.lower)) / 2.0


class SplitTree:
    """
    Immutable fair split tree.

    Attributes:
        points (PointSet): The indexed point set.
        order (np.ndarray): Permutation of point indices; node i owns order[start:end].
        nodes (list[SplitNode]): Node 0 is the root.
    """

    def __init__(self, points, order, nodes):
        self.points = points
        self.order = order
        self.nodes = nodes

    @property
    def root(self):
        return 0

    def node_points(self, node_id):
        node = self.nodes[node_id]
        return self.order[node.start:node.end]

    def leaves(self):
        return [i for i, node in enumerate(self.nodes) if node.is_leaf]

    def height(self):
        depth = {0: 0}
        best = 0
        for node_id, node in enumerate(self.nodes):
            if not node.is_leaf:
                depth[node.left] = depth[node_id] + 1
                depth[node.right] = depth[node_id] + 1
                best = max(best, depth[node_id] + 1)
        return best


def _split_slice(coords, order, start, end):
    """
    Partitions order[start:end] in place around the fair split and returns the split position.
    """
    idx = order[start:end]
    pts = coords[idx]
    lower = pts.min(axis=0)
    upper = pts.max(axis=0)
    extent = upper - lower
    # np.argmax picks the lowest axis among equal longest sides
    axis = int(np.argmax(extent))
    mid = (lower[axis] + upper[axis]) / 2.0
    goes_left = pts[:, axis] < mid
    n_left = int(goes_left.sum())
    if n_left == 0 or n_left == len(idx):
        # midpoint collapsed onto an endpoint in floating point; fall back to the median
        ranks = np.argsort(pts[:, axis], kind="stable")
        order[start:end] = idx[ranks]
        return start + len(idx) // 2
    order[start:end] = np.concatenate([idx[goes_left], idx[~goes_left]])
    return start + n_left


def build_split_tree(ps):
    """
    Builds the fair split tree of a point set.

    Args:
        ps (PointSet): At least one point.

    Returns:
        SplitTree: The tree; leaves hold exactly one point each.
    """
    n = len(ps)
    if n < 1:
        raise UsageError("cannot build a split tree on an empty point set")

    coords = ps.coords
    order = np.arange(n)
    # Children are created after their parent, so collect raw node fields first
    # and resolve representatives bottom-up at the end.
    starts, ends, lefts, rights = [0], [n], [-1], [-1]
    stack = [0]
    while stack:
        node_id = stack.pop()
        start, end = starts[node_id], ends[node_id]
        if end - start == 1:
            continue
        split = _split_slice(coords, order, start, end)
        for child_start, child_end in ((start, split), (split, end)):
            starts.append(child_start)
            ends.append(child_end)
            lefts.append(-1)
            rights.append(-1)
        lefts[node_id] = len(starts) - 2
        rights[node_id] = len(starts) - 1
        stack.append(lefts[node_id])
        stack.append(rights[node_id])

    representatives = [-1] * len(starts)
    for node_id in range(len(starts) - 1, -1, -1):
        if lefts[node_id] < 0:
            representatives[node_id] = int(order[starts[node_id]])
        else:
            representatives[node_id] = representatives[lefts[node_id]]

    nodes = []
    for node_id in range(len(starts)):
        pts = coords[order[starts[node_id]:ends[node_id]]]
        nodes.append(SplitNode(
            start=starts[node_id],
            end=ends[node_id],
            lower=pts.min(axis=0),
            upper=pts.max(axis=0),
            representative=representatives[node_id],
            left=lefts[node_id],
            right=rights[node_id],
        ))

    order.flags.writeable = False
    tree = SplitTree(ps, order, nodes)
    logging.debug(f"Built split tree with {len(nodes)} nodes over {n} points (height {tree.height()}).")
    return tree
