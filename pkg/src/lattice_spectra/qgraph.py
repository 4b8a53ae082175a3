"""Equilateral quantum graphs: discrete/metric spectral correspondence.

For an equilateral graph (all edge lengths 1) with Kirchhoff vertex
conditions, an energy ``E`` outside ``Sigma_D = {(pi k)^2 : k >= 1}`` is a
metric eigenvalue exactly when ``1 - cos(sqrt(E))`` is an eigenvalue of the
normalized Laplacian of the underlying graph. At ``E = (pi k)^2`` the
Dirichlet eigenfunctions ``a_e sin(k pi t)`` appear; they vanish at every
vertex and are counted by the kernel of a signed incidence matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph, connected_components
from .kagome import KAGOME_ENERGY, kagome_counting
from .lattices import HEX_STEPS, _unit_graph
from .linalg import RationalMatrix, rational_kernel
from .operators import OperatorSpec, build_operator, exact_multiplicity
from .quadratic import lattice_point

SIGMA_D_TOL = 1e-9

# edges of the Y-shaped fundamental domain in the (w1, w2) basis
Y_CELL_EDGES = (
    ((0, 0), (1, 0)),
    ((1, 0), (2, 0)),
    ((1, 0), (2, -1)),
    ((0, 0), (0, -1)),
    ((0, -1), (0, -2)),
    ((0, -1), (1, -2)),
)


@dataclass(frozen=True)
class EquilateralMetricGraph:
    """Graph with every edge an oriented interval ``[0, 1]``.

    ``orientation[k] = (source, target)`` for the ``k``-th edge of
    ``graph.edges()``; by default the smaller vertex is the source.
    """

    graph: Graph
    orientation: tuple = None

    def __post_init__(self):
        if self.orientation is None:
            object.__setattr__(self, "orientation", tuple(self.graph.edges()))
        edges = {(min(s, t), max(s, t)) for s, t in self.orientation}
        if len(edges) != len(self.orientation) or edges != set(self.graph.edges()):
            raise ValueError("orientation must cover every edge exactly once")

    @property
    def volume(self) -> int:
        return len(self.orientation)


def in_sigma_d(e: float, tol: float = SIGMA_D_TOL) -> bool:
    if e <= 0:
        return False
    k = round(math.sqrt(e) / math.pi)
    return k >= 1 and abs(e - (math.pi * k) ** 2) <= tol * max(1.0, e)


def correspondence_energies(lam: float, e_max: float) -> list:
    """Metric energies ``0 < E < e_max`` with ``cos(sqrt E) = 1 - lam``, outside ``Sigma_D``.

    ``E = 0`` itself is left out together with ``Sigma_D``.
    """
    if not -1e-12 <= lam <= 2 + 1e-12:
        raise ValueError(f"normalized Laplacian eigenvalue {lam} outside [0, 2]")
    if e_max <= 0:
        raise ValueError("e_max must be positive")
    lam = min(max(lam, 0.0), 2.0)
    theta = math.acos(1.0 - lam)
    out = set()
    m = 0
    while (2 * math.pi * m) ** 2 < e_max + (4 * math.pi) ** 2:
        for root in (theta + 2 * math.pi * m, 2 * math.pi - theta + 2 * math.pi * m):
            e = root * root
            if 0 < e < e_max and not in_sigma_d(e):
                out.add(round(e, 12))
        m += 1
    return sorted(out)


def dirichlet_matrix(g: EquilateralMetricGraph, k: int, dirichlet_vertices=()) -> RationalMatrix:
    """Kirchhoff current rows for edge functions ``a_e sin(k pi t)``.

    Entry ``+1`` at ``(source, e)`` and ``-(-1)^k`` at ``(target, e)``.
    Rows of ``dirichlet_vertices`` are dropped (no current condition there).
    """
    if k < 1:
        raise ValueError("k must be positive")
    skip = set(dirichlet_vertices)
    rows = {v: {} for v in range(g.graph.n) if v not in skip}
    sign = Fraction(-((-1) ** k))
    for e, (s, t) in enumerate(g.orientation):
        if s in rows:
            rows[s][e] = rows[s].get(e, Fraction(0)) + 1
        if t in rows:
            rows[t][e] = rows[t].get(e, Fraction(0)) + sign
    data = [{c: x for c, x in r.items() if x != 0} for _, r in sorted(rows.items())]
    return RationalMatrix(len(data), g.volume, data)


def dirichlet_multiplicity(g: EquilateralMetricGraph, k: int, dirichlet_vertices=()) -> int:
    dim, _ = rational_kernel(dirichlet_matrix(g, k, dirichlet_vertices))
    return dim


def metric_kagome_patch(L: int) -> EquilateralMetricGraph:
    """Union of the ``L x L`` translates of the Y-shaped Kagome domain.

    It has ``6 L^2`` edges (the volume) and ``3 L^2 + 4 L`` vertices.
    """
    if L < 1:
        raise ValueError("L must be positive")
    points, index, edges = [], {}, []
    for g1 in range(L):
        for g2 in range(L):
            off = (2 * g1, 2 * g2)
            ends = []
            for a, b in Y_CELL_EDGES:
                pa = (a[0] + off[0], a[1] + off[1])
                pb = (b[0] + off[0], b[1] + off[1])
                for p in (pa, pb):
                    if p not in index:
                        index[p] = len(points)
                        points.append(p)
                ends.append((index[pa], index[pb]))
            edges.extend(ends)
    graph = _unit_graph(points, HEX_STEPS, lattice_point, lattice_degree=4)
    own = {(min(a, b), max(a, b)) for a, b in edges}
    # translates only contribute their own Y edges, not every unit-distance pair
    graph = Graph.from_edges(len(points), sorted(own), coords=graph.coords,
                             labels=tuple(points), lattice_degree=4)
    return EquilateralMetricGraph(graph)


@dataclass
class MetricIDS:
    """Correspondence-assembled metric IDS on a finite equilateral patch."""

    L: int
    e_max: float
    volume: int
    jumps: list
    energies: np.ndarray
    counts: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __call__(self, e: float) -> float:
        return float(np.searchsorted(self.energies, e, side="right") + self._jump_mass(e)) / self.volume

    def _jump_mass(self, e: float) -> int:
        return sum(j["multiplicity"] for j in self.jumps if j["origin"] == "dirichlet" and j["energy"] <= e)

    def evaluate(self, grid) -> np.ndarray:
        return np.array([self(x) for x in np.asarray(grid, dtype=float)])

    def jump_near(self, e: float, tol: float = 1e-6):
        for j in self.jumps:
            if abs(j["energy"] - e) <= tol * max(1.0, e):
                return j
        return None

    def csv_rows(self, grid) -> list:
        pts = np.union1d(np.asarray(grid, dtype=float),
                         np.array([j["energy"] for j in self.jumps] + list(self.energies)))
        pts = pts[(pts >= 0) & (pts <= self.e_max)]
        return list(zip(pts.tolist(), self.evaluate(pts).tolist()))


def metric_kagome_ids(L: int, e_max: float, dirichlet_boundary: bool = False) -> MetricIDS:
    """Metric Kagome IDS from the discrete patch spectrum plus Dirichlet jumps.

    Each discrete eigenvalue of multiplicity ``m`` contributes ``m`` at every
    branch energy. Discrete eigenvalues ``0`` and ``2`` have all branches in
    ``Sigma_D`` or at ``0``; they are folded into the jump at ``0`` and at
    the even/odd Dirichlet energies respectively. The normalization is the
    edge count of the metric patch.
    """
    if L < 2:
        raise ValueError("need L >= 2")
    mg = metric_kagome_patch(L)
    vol = mg.volume
    n = kagome_counting(L)
    ev = n.eigenvalues
    mult32 = n.exact_multiplicities[KAGOME_ENERGY]
    near32 = np.abs(ev - 1.5) <= 1e-8
    energies = []
    for lam in ev[~near32]:
        energies.extend(correspondence_energies(float(lam), e_max))
    jumps = []
    for e in correspondence_energies(1.5, e_max):
        energies.extend([e] * mult32)
        jumps.append({"energy": e, "multiplicity": mult32, "size": Fraction(mult32, vol),
                      "origin": "vertex_spectrum"})
    zero_mult = int(np.sum(np.abs(ev) <= 1e-8))
    two_mult = int(np.sum(np.abs(ev - 2) <= 1e-8))
    boundary = [v for v in range(mg.graph.n) if mg.graph.degree(v) < 4] if dirichlet_boundary else []
    comps = len(connected_components(mg.graph))
    k = 1
    while (math.pi * k) ** 2 <= e_max:
        mult = dirichlet_multiplicity(mg, k, boundary) + (zero_mult if k % 2 == 0 else two_mult)
        jumps.append({"energy": (math.pi * k) ** 2, "multiplicity": mult, "size": Fraction(mult, vol),
                      "origin": "dirichlet"})
        k += 1
    if zero_mult:
        jumps.append({"energy": 0.0, "multiplicity": zero_mult, "size": Fraction(zero_mult, vol),
                      "origin": "dirichlet"})
    jumps.sort(key=lambda j: j["energy"])
    energies = np.sort(np.array(energies))
    counts = np.arange(1, energies.size + 1)
    meta = {
        "construction": "correspondence-assembled",
        "multiplicity_transport": "each discrete eigenvalue contributes its multiplicity to every branch",
        "boundary_vertices": "dirichlet" if dirichlet_boundary else "kirchhoff",
        "folded_eigenvalues": {"0": zero_mult, "2": two_mult},
        "metric_vertices": mg.graph.n,
        "components": comps,
    }
    return MetricIDS(L, float(e_max), vol, jumps, energies, counts, meta)


def triangle_graph() -> EquilateralMetricGraph:
    return EquilateralMetricGraph(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
                                  orientation=((0, 1), (1, 2), (2, 0)))


def c3_cross_validation(m_max: int = 6) -> dict:
    """Check the correspondence on the equilateral triangle (a loop of length 3)."""
    tri = triangle_graph()
    op = build_operator(tri.graph, OperatorSpec("normalized_laplacian"))
    exact = {Fraction(0): exact_multiplicity(op, 0), Fraction(3, 2): exact_multiplicity(op, Fraction(3, 2))}
    spectrum_ok = exact == {Fraction(0): 1, Fraction(3, 2): 2}
    rows = []
    ok = spectrum_ok
    for m in range(0, m_max + 1):
        e = (2 * math.pi * m / 3) ** 2
        lam = 1 - math.cos(2 * math.pi * m / 3)
        if m % 3 == 0:
            expected = Fraction(0)
        else:
            expected = Fraction(3, 2)
        match = abs(lam - float(expected)) <= 1e-12
        row = {"m": m, "energy": e, "one_minus_cos": lam, "discrete": expected, "match": match}
        if in_sigma_d(e):
            k = round(math.sqrt(e) / math.pi)
            row["dirichlet_multiplicity"] = dirichlet_multiplicity(tri, k)
            match = match and row["dirichlet_multiplicity"] == (1 if k % 2 == 0 else 0)
        ok = ok and match
        rows.append(row)
    return {"discrete_multiplicities": {str(k): v for k, v in exact.items()},
            "rows": rows, "passed": ok}
