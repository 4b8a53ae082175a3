import math
from fractions import Fraction

import numpy as np
import pytest

from lattice_spectra.lattices import (KAGOME_CELL, kagome_patch, patch_graph, tessellation_patch,
                                      trace_faces, zd_box)
from lattice_spectra.quadratic import QSqrt3, lattice_point, squared_distance


@pytest.mark.parametrize("d,L", [(1, 6), (2, 5), (3, 4)])
def test_zd_box_counts(d, L):
    g = zd_box(d, L)
    assert g.n == L ** d
    assert g.edge_count == d * L ** (d - 1) * (L - 1)
    assert g.lattice_degree == 2 * d


def test_zd_box_limits():
    with pytest.raises(ValueError):
        zd_box(4, 3)
    with pytest.raises(ValueError):
        zd_box(2, 1001)


def test_exact_coordinates():
    x, y = lattice_point(1, 1)
    assert x == QSqrt3(Fraction(3, 2)) and y == QSqrt3(0, Fraction(1, 2))
    assert squared_distance(lattice_point(0, 0), lattice_point(0, 1)) == QSqrt3(1)
    assert squared_distance(lattice_point(0, 0), lattice_point(1, 1)) == QSqrt3(3)


@pytest.mark.parametrize("L", [2, 3, 4, 6])
def test_kagome_counts(L):
    p = kagome_patch(L)
    assert p.graph.n == 3 * L * L
    assert p.graph.edge_count == 6 * L * L - 4 * L
    assert len(p.hexagons) == (L - 1) ** 2
    assert len(p.interior_hexagons()) == (L - 2) ** 2
    assert max(p.graph.degree(v) for v in range(p.graph.n)) == 4


def test_kagome_vertices_not_both_odd():
    p = kagome_patch(4)
    assert all(not (m % 2 and n % 2) for m, n in p.points)
    assert p.cell_vertices[0] == (0, 1, 2)
    assert [p.points[v] for v in p.cell_vertices[0]] == list(KAGOME_CELL)


def _six_cycles_around_centers(g):
    """Brute-force oracle: 6-cycles whose vertices are equidistant (1) from a point."""
    xy = np.array([[float(c[0]), float(c[1])] for c in g.coords])
    found = set()

    def extend(path):
        if len(path) == 6:
            if path[0] in g.adjacency[path[-1]]:
                found.add(frozenset(path))
            return
        for w in g.adjacency[path[-1]]:
            if w > path[0] and w not in path:
                extend(path + [w])

    for s in range(g.n):
        extend([s])
    hexes = set()
    for cyc in found:
        c = xy[list(cyc)].mean(axis=0)
        if np.allclose(np.linalg.norm(xy[list(cyc)] - c, axis=1), 1.0):
            hexes.add(cyc)
    return hexes


@pytest.mark.parametrize("L", [3, 4])
def test_kagome_hexagons_match_bruteforce(L):
    p = kagome_patch(L)
    assert {frozenset(h) for h in p.hexagons} == _six_cycles_around_centers(p.graph)


def test_kagome_hexagon_order_is_cyclic():
    p = kagome_patch(3)
    for h in p.hexagons:
        for k in range(6):
            assert h[(k + 1) % 6] in p.graph.adjacency[h[k]]


@pytest.mark.parametrize("kind,faces", [("square", 9), ("triangular", 18), ("hexagonal", 12)])
def test_tessellation_face_counts(kind, faces):
    t = tessellation_patch(kind, 3)
    assert len(t.faces) == faces


def test_kagome_tessellation_faces():
    t = tessellation_patch("kagome", 3)
    sides = sorted(t.face_sides)
    assert sides.count(3) == 12 and sides.count(6) == 4


@pytest.mark.parametrize("kind,deg", [("square", 4), ("triangular", 6), ("hexagonal", 3), ("kagome", 4)])
def test_interior_vertices_have_full_faces(kind, deg):
    t = tessellation_patch(kind, 5)
    assert t.interior_vertices()
    for v in t.interior_vertices():
        assert t.graph.degree(v) == deg
        assert len(t.faces_at(v)) == deg


def test_faces_are_counterclockwise_polygons():
    t = tessellation_patch("hexagonal", 2)
    for f in trace_faces(t.graph):
        xy = [(float(t.graph.coords[v][0]), float(t.graph.coords[v][1])) for v in f]
        area = sum(xy[k][0] * xy[(k + 1) % len(f)][1] - xy[(k + 1) % len(f)][0] * xy[k][1]
                   for k in range(len(f)))
        assert area > 0
        assert math.isclose(area / 2, 6 * math.sqrt(3) / 4, rel_tol=1e-9)


def test_unknown_kind():
    with pytest.raises(ValueError):
        tessellation_patch("penrose", 3)
    with pytest.raises(ValueError):
        patch_graph("penrose", 3)
