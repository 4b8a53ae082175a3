"""Constructors for Z^d boxes, Kagome patches and planar tessellation patches.

Planar lattices are described in the basis ``w1 = 1``, ``w2 = exp(i pi/3)``
(integer pairs ``(m, n)`` meaning ``m*w1 + n*w2``), except the square
lattice which uses plain integer coordinates. Exact coordinates are kept as
:class:`~lattice_spectra.quadratic.QSqrt3` pairs and edges are decided by
exact squared distance one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph, box_sites
from .quadratic import QSqrt3, lattice_point, squared_distance

MAX_BOX_SITES = 10 ** 6

# unit steps of the triangular lattice in the (w1, w2) basis, counterclockwise
HEX_STEPS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
SQUARE_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))

# combinatorial fundamental domain {0, w1, -w2} of the Kagome lattice
KAGOME_CELL = ((0, 0), (1, 0), (0, -1))

TESSELLATION_KINDS = ("square", "triangular", "hexagonal", "kagome")
_LATTICE_DEGREE = {"square": 4, "triangular": 6, "hexagonal": 3, "kagome": 4}
_FACE_SIDES = {"square": (4,), "triangular": (3,), "hexagonal": (6,), "kagome": (3, 6)}


def zd_box(d: int, L: int) -> Graph:
    """Nearest-neighbor graph on the cornered box ``{0..L-1}^d``.

    Vertices are numbered row-major; ``labels`` carry the integer
    coordinates and ``lattice_degree`` is ``2d``.
    """
    if d not in (1, 2, 3):
        raise ValueError("d must be 1, 2 or 3")
    if L < 1:
        raise ValueError("L must be positive")
    if L ** d > MAX_BOX_SITES:
        raise ValueError(f"box with {L ** d} sites exceeds the {MAX_BOX_SITES} site limit")
    sites = box_sites(L, d)
    strides = [L ** (d - 1 - k) for k in range(d)]
    edges = []
    for idx, site in enumerate(sites):
        for k in range(d):
            if site[k] + 1 < L:
                edges.append((idx, idx + strides[k]))
    return Graph.from_edges(len(sites), edges, labels=tuple(sites), lattice_degree=2 * d)


def _unit_graph(points, steps, coord, labels=None, lattice_degree=None) -> Graph:
    index = {p: k for k, p in enumerate(points)}
    coords = tuple(coord(*p) for p in points)
    edges = []
    for k, p in enumerate(points):
        for s in steps:
            q = (p[0] + s[0], p[1] + s[1])
            j = index.get(q)
            if j is not None and k < j and squared_distance(coords[k], coords[j]) == 1:
                edges.append((k, j))
    return Graph.from_edges(len(points), edges, coords=coords,
                            labels=tuple(labels) if labels is not None else tuple(points),
                            lattice_degree=lattice_degree)


@dataclass(frozen=True)
class KagomePatch:
    """Kagome vertices ``T_gamma(Q)`` for cells ``gamma`` in ``{0..L-1}^2``.

    ``points`` are lattice coordinates in the (w1, w2) basis, ``hexagons``
    are vertex 6-tuples ordered as ``z0 + exp(i k pi/3)``, ``k = 0..5``.
    """

    L: int
    graph: Graph
    cells: tuple
    cell_vertices: tuple
    points: tuple
    hexagons: tuple
    hexagon_centers: tuple

    def vertex_at(self, m: int, n: int):
        try:
            return self.points.index((m, n))
        except ValueError:
            return None

    def is_interior_hexagon(self, h: int) -> bool:
        return all(self.graph.degree(v) == 4 for v in self.hexagons[h])

    def interior_hexagons(self) -> list:
        return [h for h in range(len(self.hexagons)) if self.is_interior_hexagon(h)]

    def center_point(self, h: int):
        return lattice_point(*self.hexagon_centers[h])


def kagome_patch(L: int) -> KagomePatch:
    """Kagome patch ``Lambda_{Q,L}`` with ``3 L^2`` vertices.

    Edges join vertices at exact Euclidean distance one; hexagons are the
    6-cycles around centers ``(2a+1) w1 + (2b+1) w2`` whose six vertices
    all lie in the patch.
    """
    if L < 1:
        raise ValueError("L must be positive")
    cells = [(g1, g2) for g1 in range(L) for g2 in range(L)]
    points, labels, cell_vertices = [], [], []
    for g1, g2 in cells:
        trip = []
        for k, (qm, qn) in enumerate(KAGOME_CELL):
            trip.append(len(points))
            points.append((2 * g1 + qm, 2 * g2 + qn))
            labels.append((g1, g2, k))
        cell_vertices.append(tuple(trip))
    graph = _unit_graph(points, HEX_STEPS, lattice_point, labels=labels, lattice_degree=4)
    index = {p: k for k, p in enumerate(points)}
    hexagons, centers = [], []
    for a in range(-1, L + 1):
        for b in range(-1, L + 1):
            z0 = (2 * a + 1, 2 * b + 1)
            verts = [index.get((z0[0] + s[0], z0[1] + s[1])) for s in HEX_STEPS]
            if any(v is None for v in verts):
                continue
            for k in range(6):
                u, w = verts[k], verts[(k + 1) % 6]
                if w not in graph.adjacency[u]:
                    raise AssertionError(f"hexagon around {z0} is not a 6-cycle")
            hexagons.append(tuple(verts))
            centers.append(z0)
    return KagomePatch(L, graph, tuple(cells), tuple(cell_vertices), tuple(points),
                       tuple(hexagons), tuple(centers))


@dataclass(frozen=True)
class Tessellation:
    """Finite patch of a planar tessellation with its bounded tile faces."""

    kind: str
    graph: Graph
    faces: tuple
    vertex_interior: tuple
    face_interior: tuple

    @property
    def face_sides(self) -> tuple:
        return tuple(len(f) for f in self.faces)

    def faces_at(self, v: int) -> list:
        return [k for k, f in enumerate(self.faces) if v in f]

    def interior_vertices(self) -> list:
        return [v for v, flag in enumerate(self.vertex_interior) if flag]


def _float_xy(p):
    return float(p[0]), float(p[1])


def trace_faces(g: Graph) -> list:
    """Bounded faces of a straight-line planar embedding, counterclockwise.

    Walks every half-edge keeping the face on the left; faces with
    non-positive signed area (the outer face) are discarded.
    """
    xy = [_float_xy(p) for p in g.coords]
    order = []
    for v in range(g.n):
        x0, y0 = xy[v]
        order.append(sorted(g.adjacency[v], key=lambda w: math.atan2(xy[w][1] - y0, xy[w][0] - x0)))
    pos = [{w: k for k, w in enumerate(order[v])} for v in range(g.n)]
    used = set()
    faces = []
    for u in range(g.n):
        for v in g.adjacency[u]:
            if (u, v) in used:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in used:
                used.add((a, b))
                cyc.append(a)
                nb = order[b]
                w = nb[(pos[b][a] - 1) % len(nb)]
                a, b = b, w
            area = 0.0
            for k in range(len(cyc)):
                x1, y1 = xy[cyc[k]]
                x2, y2 = xy[cyc[(k + 1) % len(cyc)]]
                area += x1 * y2 - x2 * y1
            if area > 1e-9:
                faces.append(tuple(cyc))
    return faces


def _regular_area(k: int) -> float:
    return k / (4.0 * math.tan(math.pi / k))


def tessellation_patch(kind: str, L: int) -> Tessellation:
    """Patch of the square, triangular, hexagonal or Kagome tiling.

    Faces on the rim are kept but flagged non-interior. A vertex is
    interior when it has full lattice degree and as many incident faces as
    edges; a face is interior when each of its sides borders a second face.
    """
    if kind not in TESSELLATION_KINDS:
        raise ValueError(f"unknown tessellation kind {kind!r}; expected one of {TESSELLATION_KINDS}")
    if L < 1:
        raise ValueError("L must be positive")
    deg = _LATTICE_DEGREE[kind]
    if kind == "square":
        pts = [(i, j) for i in range(L + 1) for j in range(L + 1)]
        g = _unit_graph(pts, SQUARE_STEPS, lambda i, j: (QSqrt3(i), QSqrt3(j)), lattice_degree=deg)
    elif kind == "triangular":
        pts = [(m, n) for m in range(L + 1) for n in range(L + 1)]
        g = _unit_graph(pts, HEX_STEPS, lattice_point, lattice_degree=deg)
    elif kind == "hexagonal":
        pts = [(m, n) for m in range(2 * L + 2) for n in range(2 * L + 2) if (m - n) % 3 != 0]
        g = _unit_graph(pts, HEX_STEPS, lattice_point, lattice_degree=deg)
    else:
        g = kagome_patch(L).graph

    sides = _FACE_SIDES[kind]
    faces = []
    for f in trace_faces(g):
        if len(f) not in sides:
            continue
        xy = [_float_xy(g.coords[v]) for v in f]
        area = 0.5 * sum(xy[k][0] * xy[(k + 1) % len(f)][1] - xy[(k + 1) % len(f)][0] * xy[k][1]
                         for k in range(len(f)))
        if abs(area - _regular_area(len(f))) < 1e-6:
            faces.append(f)
    faces.sort(key=lambda f: (min(f), f))

    edge_faces = {}
    for k, f in enumerate(faces):
        for a, b in zip(f, f[1:] + f[:1]):
            edge_faces.setdefault((min(a, b), max(a, b)), []).append(k)
    incident = [0] * g.n
    for f in faces:
        for v in f:
            incident[v] += 1
    vertex_interior = tuple(g.degree(v) == deg and incident[v] == deg for v in range(g.n))
    face_interior = tuple(
        all(len(edge_faces[(min(a, b), max(a, b))]) == 2 for a, b in zip(f, f[1:] + f[:1]))
        for f in faces
    )
    return Tessellation(kind, g, tuple(faces), vertex_interior, face_interior)


def patch_graph(kind: str, L: int, d: int = 2) -> Graph:
    """Convenience dispatcher used by the command line front end."""
    if kind == "zd":
        return zd_box(d, L)
    if kind == "kagome":
        return kagome_patch(L).graph
    return tessellation_patch(kind, L).graph
