"""Corner and vertex curvature of planar tessellation patches.

A corner is a vertex-face incidence ``(v, f)``. With ``|v|`` the vertex
degree and ``|f|`` the number of sides of the face,

    kappa(v, f) = 1/|v| + 1/|f| - 1/2,
    kappa(v)    = 1 - |v|/2 + sum_{f containing v} 1/|f|.

Only interior vertices and faces of a finite patch carry complete
incidence data, so only those are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .continuation import finitely_supported_eigenfunction_exists, rational_candidates
from .graph import VertexSet
from .lattices import Tessellation
from .operators import OperatorSpec, build_operator


class NonInteriorError(ValueError):
    """Raised when curvature is requested where the patch lacks incidence data."""


@dataclass(frozen=True)
class Corner:
    v: int
    f: int


def _check_corner(t: Tessellation, c: Corner) -> None:
    if not 0 <= c.f < len(t.faces) or c.v not in t.faces[c.f]:
        raise ValueError(f"vertex {c.v} is not on face {c.f}")
    if not t.vertex_interior[c.v] or not t.face_interior[c.f]:
        raise NonInteriorError(f"corner ({c.v}, {c.f}) is not interior to the patch")


def corner_curvature(t: Tessellation, c: Corner) -> Fraction:
    _check_corner(t, c)
    return Fraction(1, t.graph.degree(c.v)) + Fraction(1, len(t.faces[c.f])) - Fraction(1, 2)


def vertex_curvature(t: Tessellation, v: int) -> Fraction:
    if not t.vertex_interior[v]:
        raise NonInteriorError(f"vertex {v} is not interior to the patch")
    faces = t.faces_at(v)
    return 1 - Fraction(t.graph.degree(v), 2) + sum((Fraction(1, len(t.faces[f])) for f in faces), Fraction(0))


def interior_corners(t: Tessellation) -> list:
    return [Corner(v, f) for f, face in enumerate(t.faces) if t.face_interior[f]
            for v in face if t.vertex_interior[v]]


def nonpositive_corner_curvature(t: Tessellation):
    """``(all interior corners <= 0, [(corner, kappa) for positive corners])``."""
    positive = []
    for c in interior_corners(t):
        k = corner_curvature(t, c)
        if k > 0:
            positive.append((c, k))
    return not positive, positive


def default_energies(t: Tessellation, max_den: int = 12) -> list:
    """Rationals ``p/q`` in ``[0, 2]`` with ``q <= max_den`` plus rationalized patch eigenvalues."""
    cands = {Fraction(p, q) for q in range(1, max_den + 1) for p in range(0, 2 * q + 1)}
    op = build_operator(t.graph, OperatorSpec("normalized_laplacian"))
    ev = np.linalg.eigvalsh(op.to_float())
    cands.update(rational_candidates(ev, max_den=max_den))
    return sorted(cands)


def curvature_vs_support_scan(t: Tessellation, energies: Iterable | None = None) -> dict:
    """Search for finitely supported eigenfunctions of the normalized Laplacian.

    The support bound is the set of interior vertices of the patch that
    have their full lattice neighborhood. The result is a semi-decision:
    an empty witness list means no witness on the candidate set only.
    """
    if energies is None:
        energies = default_energies(t)
    energies = [Fraction(e) for e in energies]
    g = t.graph
    support = VertexSet(g.n, [v for v in t.interior_vertices() if g.is_full(v)])
    spec = OperatorSpec("normalized_laplacian")
    witnesses = []
    for e in energies:
        res = finitely_supported_eigenfunction_exists(g, spec, e, support)
        if res.exists:
            witnesses.append({"energy": e, "dimension": res.dimension})
    nonpos, positive = nonpositive_corner_curvature(t)
    return {
        "kind": t.kind,
        "scanned_region": f"{len(support)} interior vertices with full lattice degree",
        "energies_scanned": len(energies),
        "nonpositive_curvature": nonpos,
        "positive_corners": len(positive),
        "positive_corner_values": sorted({k for _, k in positive}),
        "witnesses": witnesses,
        "conclusion": ("witness found" if witnesses else "no witness found on candidate set"),
    }
