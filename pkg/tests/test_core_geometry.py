import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core_geometry.errors import InputValidationError, NoTriangleError, UsageError
from core_geometry.geometry import (
    PointSet,
    TriangleTriple,
    distance,
    distance_matrix,
    distances_from,
    exact_min_triangle,
    triangle_perimeter,
)

SQRT3 = math.sqrt(3.0)

coordinates = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
planar_points = st.tuples(coordinates, coordinates)


def equilateral_with_centroid():
    return PointSet([(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2), (0.5, SQRT3 / 6)])


def test_distance_examples():
    assert distance((0, 0), (3, 4)) == 5.0
    assert distance((1, 2, 2), (0, 0, 0)) == 3.0
    assert distance((7, 7), (7, 7)) == 0.0


def test_distance_dimension_mismatch():
    with pytest.raises(UsageError):
        distance((0, 0), (0, 0, 0))


def test_triangle_perimeter_examples():
    assert triangle_perimeter((0, 0), (1, 0), (0.5, SQRT3 / 2)) == pytest.approx(3.0, rel=1e-12)
    assert triangle_perimeter((0, 0), (3, 0), (0, 4)) == 12.0
    assert triangle_perimeter((0, 0), (1, 0), (2, 0)) == 4.0


@given(planar_points, planar_points, planar_points)
def test_triangle_perimeter_permutation_invariant(a, b, c):
    reference = triangle_perimeter(a, b, c)
    for x, y, z in itertools.permutations((a, b, c)):
        assert triangle_perimeter(x, y, z) == pytest.approx(reference, rel=1e-12, abs=1e-9)


@given(planar_points, planar_points)
def test_distance_symmetric(a, b):
    assert distance(a, b) == distance(b, a)


def test_point_set_rejects_bad_input():
    with pytest.raises(InputValidationError):
        PointSet([(0.0, 0.0), (0.0, 0.0)])
    with pytest.raises(InputValidationError):
        PointSet([(0.0, float('nan'))])
    with pytest.raises(InputValidationError):
        PointSet([(0.0, 1.0)], dimension=3)


def test_point_set_is_read_only():
    ps = PointSet([(0.0, 0.0), (1.0, 2.0)])
    with pytest.raises(ValueError):
        ps.coords[0, 0] = 5.0
    assert ps[1] == (1.0, 2.0)
    assert len(ps) == 2 and ps.dimension == 2


def test_triangle_triple_validation():
    with pytest.raises(UsageError):
        TriangleTriple(0, 0, 1, 1.0)
    with pytest.raises(UsageError):
        TriangleTriple(0, 1, 2, -1.0)
    ps = PointSet([(0, 0), (3, 0), (0, 4)])
    triple = TriangleTriple.from_points(ps, 0, 1, 2)
    assert triple.perimeter == 12.0
    assert triple.perimeter_matches(ps)
    assert triple.edges == ((0, 1), (1, 2), (0, 2))


def test_distances_from_matches_scalar_distance():
    rng = np.random.default_rng(3)
    ps = PointSet(rng.random((40, 3)))
    for i in range(len(ps)):
        row = distances_from(ps, i)
        for j in range(len(ps)):
            assert row[j] == distance(ps[i], ps[j])
    assert np.array_equal(distance_matrix(ps), distance_matrix(ps).T)


def test_exact_min_triangle_collinear():
    ps = PointSet([(0, 0), (1, 0), (2, 0), (10, 0)])
    triple = exact_min_triangle(ps, 0, 1)
    assert triple.r == 2
    assert triple.perimeter == 4.0


def test_exact_min_triangle_prefers_centroid():
    triple = exact_min_triangle(equilateral_with_centroid(), 0, 1)
    assert triple.r == 3
    assert triple.perimeter == pytest.approx(1 + 2 / SQRT3, rel=1e-12)


def test_exact_min_triangle_three_points():
    ps = PointSet([(0, 0), (3, 0), (0, 4)])
    assert exact_min_triangle(ps, 2, 0).r == 1


def test_exact_min_triangle_errors():
    with pytest.raises(NoTriangleError):
        exact_min_triangle(PointSet([(0, 0), (1, 0)]), 0, 1)
    with pytest.raises(UsageError):
        exact_min_triangle(equilateral_with_centroid(), 2, 2)


def test_exact_min_triangle_ties_go_to_smallest_index():
    # (0, 1) and (0, -1) are equally good third points for the pair on the x-axis
    ps = PointSet([(-1, 0), (1, 0), (0, 1), (0, -1)])
    assert exact_min_triangle(ps, 0, 1).r == 2


def test_exact_min_triangle_is_minimal_on_random_sets():
    rng = np.random.default_rng(11)
    for _ in range(20):
        ps = PointSet(rng.random((30, 2)))
        p, q = (int(i) for i in rng.choice(len(ps), size=2, replace=False))
        triple = exact_min_triangle(ps, p, q)
        best = distance(ps[p], ps[triple.r]) + distance(ps[q], ps[triple.r])
        for x in range(len(ps)):
            if x not in (p, q):
                assert distance(ps[p], ps[x]) + distance(ps[q], ps[x]) >= best
        # any triangle through p and q is at least twice |pq| long
        assert triple.perimeter >= 2 * distance(ps[p], ps[q]) * (1 - 1e-12)
