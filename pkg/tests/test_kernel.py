import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from conftest import assert_within_budgets
from helly_lattice.constructions import five_point, hyperbola
from helly_lattice.kernel import (
    CertificationFailed,
    EdgeType,
    Orientation,
    Polygon,
    classify_edge,
    convex_hull,
    edge_type_counts,
    edge_types,
    is_convex_position,
    is_empty_polygon,
    orient,
    orientation_table,
)
from helly_lattice.lattice import LatticeSpec, Window, enumerate_points
from helly_lattice.scalar import surd, to_float

L2 = LatticeSpec.diagonal(2)
PHI = surd(F(1, 2), F(1, 2), 5)
CYCLE = [EdgeType.I, EdgeType.II, EdgeType.III, EdgeType.IV]


def test_orient_examples():
    assert orient(L2, (0, 0), (1, 1), (2, 2)) is Orientation.COLLINEAR
    assert orient(L2, (0, 2), (1, 1), (2, 0)) is Orientation.CCW
    assert orient(L2, (2, 0), (1, 1), (0, 2)) is Orientation.CW


def test_orient_matches_float_oracle():
    pts = enumerate_points(L2, Window(5, 5))
    for p, q, r in itertools.combinations(pts, 3):
        c = oracles.cross(*[(2.0 ** u, 2.0 ** v) for u, v in (p, q, r)])
        expect = (c > 0) - (c < 0)
        assert int(orient(L2, p, q, r)) == expect


def test_orient_cyclic_and_antisymmetric():
    pts = enumerate_points(L2, Window(5, 5))
    rng = random.Random(7)
    for _ in range(2000):
        p, q, r = rng.sample(pts, 3)
        o = orient(L2, p, q, r)
        assert orient(L2, q, r, p) is o and orient(L2, r, p, q) is o
        assert int(orient(L2, q, p, r)) == -int(o)


def test_convex_position_examples():
    assert is_convex_position(L2, [(0, 2), (1, 1), (2, 0), (2, 1), (1, 2)])
    assert not is_convex_position(L2, [(0, 0), (1, 1), (2, 2)])
    assert is_convex_position(LatticeSpec.diagonal(F(101, 100)), [(i, 10 - i) for i in range(1, 11)])


def test_polygon_rejects_bad_input():
    with pytest.raises(CertificationFailed):
        Polygon(L2, ((0, 0), (1, 0)))
    with pytest.raises(CertificationFailed):
        Polygon(L2, ((0, 0), (0, 1), (1, 0)))  # clockwise
    with pytest.raises(CertificationFailed):
        Polygon.from_points(L2, [(0, 0), (1, 1), (2, 2)])


def test_classify_examples():
    five = five_point(2).polygon
    k = [i for i in range(5) if {five.vertices[i], five.vertices[(i + 1) % 5]} == {(0, 2), (1, 1)}][0]
    assert classify_edge(five, k) is EdgeType.III
    cell = Polygon.from_points(L2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert edge_type_counts(cell) == {EdgeType.I: 0, EdgeType.II: 1, EdgeType.III: 2, EdgeType.IV: 1}
    hyp = hyperbola(F(101, 100)).polygon
    assert edge_type_counts(hyp) == {EdgeType.I: 1, EdgeType.II: 0, EdgeType.III: 9, EdgeType.IV: 0}


def _rational_polygons(alpha, window, count, seed):
    rng = random.Random(seed)
    spec = LatticeSpec.diagonal(alpha)
    pts = enumerate_points(spec, window)
    out = []
    while len(out) < count:
        sub = rng.sample(pts, rng.randint(3, 6))
        hull = convex_hull(spec, sub)
        if len(hull) >= 3:
            out.append(Polygon(spec, tuple(hull)))
    return out


@pytest.mark.parametrize("alpha", [2, F(3, 2), F(5, 4)])
def test_classify_matches_oracle(alpha):
    for poly in _rational_polygons(alpha, Window(5, 5), 150, seed=3):
        c = oracles.coords(alpha, poly.vertices)
        n = len(c)
        for k in range(n):
            expect = oracles.edge_type(c[k], c[(k + 1) % n], c[(k + 2) % n])
            assert classify_edge(poly, k).value == expect


def _runs(types):
    runs = [t for i, t in enumerate(types) if t != types[i - 1]] or types[:1]
    return runs


@pytest.mark.parametrize("alpha", [2, F(3, 2), PHI])
def test_types_form_at_most_four_chains(alpha):
    spec = LatticeSpec.diagonal(alpha)
    rng = random.Random(11)
    pts = enumerate_points(spec, Window(5, 5))
    for _ in range(150):
        hull = convex_hull(spec, rng.sample(pts, rng.randint(3, 8)))
        if len(hull) < 3:
            continue
        runs = _runs(edge_types(Polygon(spec, tuple(hull))))
        assert len(runs) <= 4
        # read cyclically from the smallest type, runs follow I, II, III, IV
        positions = [CYCLE.index(t) for t in runs]
        start = positions.index(min(positions))
        rotated = positions[start:] + positions[:start]
        assert rotated == sorted(rotated)


def test_emptiness_examples():
    assert is_empty_polygon(five_point(2).polygon).empty
    tri = Polygon.from_points(L2, [(0, 0), (2, 0), (0, 2)])
    cert = is_empty_polygon(tri)
    assert cert.witness == (1, 1)
    cell = Polygon.from_points(L2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert is_empty_polygon(cell).empty


def test_boundary_points_are_witnesses():
    # (1, 0) lies on the edge from (0, 0) to (2, 0)
    tri = Polygon.from_points(L2, [(0, 0), (2, 0), (2, 1)])
    assert is_empty_polygon(tri).witness == (1, 0)


@pytest.mark.parametrize("alpha", [2, F(3, 2), F(6, 5)])
def test_emptiness_matches_brute_force(alpha):
    for poly in _rational_polygons(alpha, Window(5, 5), 200, seed=5):
        cert = is_empty_polygon(poly)
        assert cert.empty == oracles.brute_empty(alpha, poly.vertices, 5, 5)
        if cert.empty:
            assert_within_budgets(poly)
        else:
            w = cert.witness
            assert w not in poly.vertices
            assert oracles.in_closed_polygon(oracles.coords(alpha, poly.vertices),
                                             oracles.coords(alpha, [w])[0])


def test_emptiness_on_fibonacci_grid():
    fib = LatticeSpec.fibonacci_grid()
    poly = Polygon.from_points(fib, [(3, 1), (5, 3), (7, 5)])
    assert is_empty_polygon(poly).empty
    poly = Polygon.from_points(fib, [(0, 0), (4, 0), (0, 4)])
    assert not is_empty_polygon(poly).empty


def test_emptiness_surd_lattice_matches_float_oracle():
    spec = LatticeSpec.diagonal(PHI)
    phi = to_float(PHI)
    rng = random.Random(2)
    pts = enumerate_points(spec, Window(5, 5))
    for _ in range(150):
        hull = convex_hull(spec, rng.sample(pts, rng.randint(3, 6)))
        if len(hull) < 3:
            continue
        poly = Polygon(spec, tuple(hull))
        fc = [(phi ** u, phi ** v) for u, v in hull]
        inside = any(
            (u, v) not in hull and all(oracles.cross(fc[i], fc[(i + 1) % len(fc)], (phi ** u, phi ** v)) >= -1e-9
                                       for i in range(len(fc)))
            for u in range(6) for v in range(6))
        assert is_empty_polygon(poly).empty == (not inside)


@pytest.mark.parametrize("spec", [L2, LatticeSpec.diagonal(F(3, 2)), LatticeSpec.diagonal(PHI),
                                  LatticeSpec.fibonacci_grid(), LatticeSpec.primes(50)])
def test_orientation_table_matches_orient(spec):
    pts = sorted({(spec.canonical_index(0, u), spec.canonical_index(1, v))
                  for u, v in enumerate_points(spec, Window(4, 4))})
    table = orientation_table(spec, pts)
    rng = random.Random(1)
    for _ in range(1500):
        i, j, k = (rng.randrange(len(pts)) for _ in range(3))
        assert table[i, j, k] == int(orient(spec, pts[i], pts[j], pts[k]))


def test_orientation_table_large_values_use_exact_objects():
    spec = LatticeSpec.diagonal(7)
    pts = enumerate_points(spec, Window(22, 22))[::37]
    table = orientation_table(spec, pts)
    assert table.dtype == np.int8
    for i, j, k in itertools.islice(itertools.combinations(range(len(pts)), 3), 400):
        assert table[i, j, k] == int(orient(spec, pts[i], pts[j], pts[k]))
