"""
s-well-separated pair decomposition computed from a fair split tree.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core_geometry.errors import UsageError


@dataclass(frozen=True)
class WellSeparatedPair:
    """
    Two disjoint split-tree nodes whose enclosing balls, both of radius
    `radius`, are at distance at least s * radius.
    """
    tree: object
    a_node: int
    b_node: int
    s: float
    radius: float

    @property
    def a_points(self):
        return self.tree.node_points(self.a_node)

    @property
    def b_points(self):
        return self.tree.node_points(self.b_node)

    def ball_gap(self):
        """Distance between the two enclosing balls of radius `radius`."""
        a = self.tree.nodes[self.a_node]
        b = self.tree.nodes[self.b_node]
        return float(np.linalg.norm(a.centre - b.centre)) - 2.0 * self.radius


def is_well_separated(node_a, node_b, s):
    """
    Separation test on the balls circumscribing both bounding boxes, with the
    two radii rounded up to their maximum.

    Returns:
        tuple: (separated, radius)
    """
    radius = max(node_a.radius, node_b.radius)
    gap = float(np.linalg.norm(node_a.centre - node_b.centre)) - 2.0 * radius
    return gap >= s * radius, radius


def compute_wspd(tree, s):
    """
    Computes an s-WSPD following the split-tree recursion: for every internal
    node pair its two children, and keep splitting the side with the larger
    enclosing ball until the pair is well separated.

    Args:
        tree (SplitTree): Fair split tree of the point set.
        s (float): Separation parameter, s > 0.

    Returns:
        list[WellSeparatedPair]: Every unordered point pair is covered exactly once.
    """
    if not s > 0 or math.isinf(s):
        raise UsageError(f"separation parameter must be a positive real, got {s}")

    nodes = tree.nodes
    pairs = []
    stack = [(node.left, node.right) for node in nodes if not node.is_leaf]
    while stack:
        a_id, b_id = stack.pop()
        a, b = nodes[a_id], nodes[b_id]
        separated, radius = is_well_separated(a, b, s)
        if separated:
            pairs.append(WellSeparatedPair(tree, a_id, b_id, s, radius))
            continue
        # split the side with the larger ball; two leaves always separate (radius 0)
        if a.radius < b.radius or (a.radius == b.radius and a.is_leaf):
            a_id, b_id, a = b_id, a_id, b
        stack.append((a.right, b_id))
        stack.append((a.left, b_id))

    pairs.reverse()
    logging.debug(f"Computed {len(pairs)}-pair WSPD with s={s:.4g} over {len(tree.points)} points.")
    return pairs


def pick_representatives(pair):
    """
    Picks up to two points per side of a well-separated pair: the node's
    representative and, if the side holds at least two points, the
    lowest-index other point.

    Returns:
        tuple: (a_picks, b_picks), each a tuple of one or two point indices.
    """
    return _pick_side(pair.tree, pair.a_node), _pick_side(pair.tree, pair.b_node)


def _pick_side(tree, node_id):
    node = tree.nodes[node_id]
    rep = node.representative
    if node.size == 1:
        return (rep,)
    members = tree.node_points(node_id)
    other = int(members[members != rep].min())
    return (rep, other)
