from fractions import Fraction

import pytest

from lattice_spectra.curvature import (Corner, NonInteriorError, corner_curvature, curvature_vs_support_scan,
                                       default_energies, interior_corners, nonpositive_corner_curvature,
                                       vertex_curvature)
from lattice_spectra.lattices import tessellation_patch


def _first_corner(t, sides):
    for c in interior_corners(t):
        if len(t.faces[c.f]) == sides:
            return c
    raise LookupError


def test_corner_values():
    sq = tessellation_patch("square", 4)
    assert corner_curvature(sq, _first_corner(sq, 4)) == 0
    kg = tessellation_patch("kagome", 5)
    assert corner_curvature(kg, _first_corner(kg, 3)) == Fraction(1, 12)
    assert corner_curvature(kg, _first_corner(kg, 6)) == Fraction(-1, 12)
    hx = tessellation_patch("hexagonal", 4)
    assert corner_curvature(hx, _first_corner(hx, 6)) == 0


@pytest.mark.parametrize("kind", ["square", "triangular", "hexagonal", "kagome"])
def test_vertex_curvature_is_sum_of_corners(kind):
    t = tessellation_patch(kind, 5)
    interior_faces = set(k for k, flag in enumerate(t.face_interior) if flag)
    for v in t.interior_vertices():
        kv = vertex_curvature(t, v)
        assert kv == 0
        faces = t.faces_at(v)
        if set(faces) <= interior_faces:
            assert kv == sum(corner_curvature(t, Corner(v, f)) for f in faces)


def test_non_interior_rejected():
    t = tessellation_patch("square", 3)
    rim = next(v for v in range(t.graph.n) if not t.vertex_interior[v])
    with pytest.raises(NonInteriorError):
        vertex_curvature(t, rim)
    f = t.faces_at(rim)[0]
    with pytest.raises(NonInteriorError):
        corner_curvature(t, Corner(rim, f))
    with pytest.raises(ValueError):
        corner_curvature(t, Corner(rim, next(k for k, face in enumerate(t.faces) if rim not in face)))


def test_predicate():
    assert nonpositive_corner_curvature(tessellation_patch("square", 4)) == (True, [])
    assert nonpositive_corner_curvature(tessellation_patch("hexagonal", 4))[0]
    ok, pos = nonpositive_corner_curvature(tessellation_patch("kagome", 5))
    assert not ok and pos
    t = tessellation_patch("kagome", 5)
    assert all(len(t.faces[c.f]) == 3 and k == Fraction(1, 12) for c, k in pos)
    triangle_corners = [c for c in interior_corners(t) if len(t.faces[c.f]) == 3]
    assert len(pos) == len(triangle_corners)


def test_curvature_depends_only_on_sizes():
    a = tessellation_patch("kagome", 4)
    b = tessellation_patch("kagome", 4)
    va = sorted(corner_curvature(a, c) for c in interior_corners(a))
    vb = sorted(corner_curvature(b, c) for c in interior_corners(b))
    assert va == vb


def test_default_energies_cover_three_halves():
    es = default_energies(tessellation_patch("square", 3))
    assert Fraction(3, 2) in es and all(0 <= e <= 2 for e in es)


@pytest.mark.parametrize("kind", ["square", "triangular", "hexagonal"])
def test_nonpositive_patches_have_no_witness(kind):
    r = curvature_vs_support_scan(tessellation_patch(kind, 5))
    assert r["nonpositive_curvature"] and r["witnesses"] == []
    assert r["conclusion"] == "no witness found on candidate set"


def test_kagome_scan_finds_three_halves():
    r = curvature_vs_support_scan(tessellation_patch("kagome", 5))
    assert not r["nonpositive_curvature"]
    assert r["positive_corner_values"] == [Fraction(1, 12)]
    assert [w["energy"] for w in r["witnesses"]] == [Fraction(3, 2)]
