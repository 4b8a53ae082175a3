"""Exact unique-continuation experiments for ``-Delta + V`` on Z^d regions.

A problem fixes a finite geometry, the sites where the eigen-equation
``(-Delta + V - E) f = 0`` is enforced, and the sites where ``f`` is
prescribed to vanish. The dimension of the exact solution space tells
whether the zero set forces ``f = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, VertexSet, boundary_collar
from .lattices import zd_box
from .linalg import RationalMatrix, rational_kernel
from .operators import OperatorSpec, build_operator


@dataclass(frozen=True)
class Geometry:
    """Finite piece of Z^d, optionally periodic in the second coordinate.

    ``kind`` is ``"box"`` (``{0..L-1}^d``) or ``"cylinder"`` (``W`` columns
    by ``H`` rows with the rows wrapped). Site coordinates are the graph
    labels; vertex ``x*H + y`` is site ``(x, y)`` on a cylinder.
    """

    kind: str
    graph: Graph
    dims: tuple

    @property
    def d(self) -> int:
        return len(self.graph.labels[0])

    def sites(self) -> list:
        return list(self.graph.labels)

    def full_neighborhood(self) -> VertexSet:
        g = self.graph
        return VertexSet(g.n, [v for v in range(g.n) if g.degree(v) == 2 * self.d])

    def where(self, predicate) -> VertexSet:
        return VertexSet(self.graph.n, [v for v, s in enumerate(self.graph.labels) if predicate(s)])

    def describe(self) -> str:
        if self.kind == "box":
            return f"box:d={self.dims[0]},L={self.dims[1]}"
        return f"cylinder:{self.dims[0]}x{self.dims[1]}"


def box(d: int, L: int) -> Geometry:
    return Geometry("box", zd_box(d, L), (d, L))


def cylinder(W: int, H: int) -> Geometry:
    """``W`` columns of a ring of ``H >= 3`` sites (Z x Z_H truncated in x)."""
    if H < 3:
        raise ValueError("cylinder circumference must be at least 3")
    if W < 1:
        raise ValueError("cylinder width must be positive")
    edges = []
    for x in range(W):
        for y in range(H):
            v = x * H + y
            edges.append((v, x * H + (y + 1) % H))
            if x + 1 < W:
                edges.append((v, v + H))
    labels = tuple((x, y) for x in range(W) for y in range(H))
    return Geometry("cylinder", Graph.from_edges(W * H, edges, labels=labels, lattice_degree=4), (W, H))


@dataclass(frozen=True)
class ContinuationProblem:
    geometry: Geometry
    zero_set: VertexSet
    equation_set: VertexSet
    potential: tuple = None
    energy: Fraction = Fraction(0)

    def __post_init__(self):
        n = self.geometry.graph.n
        if self.zero_set.n != n or self.equation_set.n != n:
            raise ValueError("vertex sets do not match the geometry")
        if not self.equation_set.issubset(self.geometry.full_neighborhood()):
            raise ValueError("equation sites need their full lattice neighborhood inside the geometry")
        if self.potential is None:
            object.__setattr__(self, "potential", tuple(Fraction(0) for _ in range(n)))
        elif len(self.potential) != n:
            raise ValueError("potential length does not match the geometry")
        object.__setattr__(self, "energy", Fraction(self.energy))

    def constraint_matrix(self) -> RationalMatrix:
        """One row per equation site, then one unit row per zero site."""
        g = self.geometry.graph
        op = build_operator(g, OperatorSpec("schrodinger", potential=self.potential,
                                            energy_shift=self.energy))
        eq_rows = [dict(op.data[i]) for i in self.equation_set]
        zero_rows = [{i: Fraction(1)} for i in self.zero_set]
        return RationalMatrix(len(eq_rows) + len(zero_rows), g.n, eq_rows + zero_rows)


@dataclass
class SolutionSpace:
    dimension: int
    basis: list
    degenerate: bool = False

    def to_json(self, with_basis: bool = False) -> dict:
        out = {"dimension": self.dimension, "degenerate": self.degenerate}
        if with_basis:
            out["basis"] = [[{"num": v.numerator, "den": v.denominator} for v in vec] for vec in self.basis]
        return out


def continuation_dimension(p: ContinuationProblem) -> SolutionSpace:
    """Exact solution space of the stacked equation/zero constraints."""
    degenerate = len(p.equation_set) == 0 and len(p.zero_set) == 0
    m = p.constraint_matrix()
    if m.rows == 0:
        n = m.cols
        basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return SolutionSpace(n, basis, degenerate=True)
    dim, basis = rational_kernel(m)
    return SolutionSpace(dim, basis, degenerate=degenerate)


def float_nullity(p: ContinuationProblem, threshold: float = 1e-8) -> int:
    """Independent float cross-check: nullity from the eigenvalues of ``M^T M``."""
    m = p.constraint_matrix().to_float()
    if m.shape[0] == 0:
        return m.shape[1]
    ev = np.linalg.eigvalsh(m.T @ m)
    scale = max(1.0, float(ev.max()))
    return int(np.sum(ev <= threshold * scale))


# ---------------------------------------------------------------------------
# standard zero sets


def slab(geom: Geometry, start: int, stop: int, axis: int = 0) -> VertexSet:
    """Sites with ``start <= coordinate[axis] < stop``."""
    return geom.where(lambda s: start <= s[axis] < stop)


def centered(geom: Geometry, site) -> tuple:
    """Box coordinates shifted so that the box center sits at the origin (odd L)."""
    c = Fraction(geom.dims[1] - 1, 2) if geom.kind == "box" else Fraction(0)
    return tuple(Fraction(x) - c for x in site)


def half_space(geom: Geometry, nu: Sequence, alpha, center: bool = True) -> VertexSet:
    """Sites ``j`` with ``<j, nu> <= alpha`` (box coordinates centered if asked)."""
    nu = [Fraction(x) for x in nu]
    alpha = Fraction(alpha)

    def inside(s):
        j = centered(geom, s) if center else s
        return sum(a * b for a, b in zip(j, nu)) <= alpha

    return geom.where(inside)


def quadrant_cover(geom: Geometry, nu: Sequence, alpha) -> VertexSet:
    """Union of the quadrants ``Q_{c1,c2}`` that witness unique continuation from a half-space.

    ``nu`` must reduce, after swapping axes and reflecting, to
    ``(1, lam)`` with ``0 <= lam < 1``. For every anti-diagonal
    ``c = j1 + j2`` meeting the box the quadrant ``{j1 <= c1, j2 <= c2}``
    with ``c1 = c - ceil((c - alpha)/(1 - lam))`` and ``c2 = c - c1`` lies in
    the half-space; the union (intersected with the box) is returned in the
    original, unreflected coordinates.
    """
    nu = [Fraction(x) for x in nu]
    if nu[0] == 0 and nu[1] == 0:
        raise ValueError("direction must be nonzero")
    swap = abs(nu[1]) > abs(nu[0])
    a, b = (nu[1], nu[0]) if swap else (nu[0], nu[1])
    if abs(a) == abs(b):
        raise ValueError("no quadrant cover exists for directions parallel to (1, 1) or (-1, 1)")
    s1 = 1 if a > 0 else -1
    s2 = 1 if b >= 0 else -1
    lam = abs(b) / abs(a)
    alpha_n = Fraction(alpha) / abs(a)

    def to_frame(j):
        j = (j[1], j[0]) if swap else (j[0], j[1])
        return (s1 * j[0], s2 * j[1])

    frame = [to_frame(centered(geom, s)) for s in geom.sites()]
    cs = sorted({j[0] + j[1] for j in frame})
    members = set()
    for c in cs:
        c1 = c - math.ceil((c - alpha_n) / (1 - lam))
        c2 = c - c1
        for v, j in enumerate(frame):
            if j[0] <= c1 and j[1] <= c2:
                members.add(v)
    return VertexSet(geom.graph.n, members)


def problem(geom: Geometry, zero_set: VertexSet, potential=None, energy=0,
            equation_set: VertexSet | None = None) -> ContinuationProblem:
    """Problem with equations at every site that has its full neighborhood (default)."""
    eq = geom.full_neighborhood() if equation_set is None else equation_set
    return ContinuationProblem(geom, zero_set, eq, potential, Fraction(energy))


def direction_survey(L: int, directions: Sequence, energy=0, potential=None,
                     alpha=0, geometry: str = "box", zero_rule: str = "half_space") -> list:
    """Continuation dimension for half-space zero sets in several directions.

    ``zero_rule="half_space"`` zeroes ``{<j, nu> <= alpha}``;
    ``zero_rule="quadrant_cover"`` zeroes the quadrant union from
    :func:`quadrant_cover`. On a cylinder the coordinates are uncentered.
    """
    rows = []
    for nu in directions:
        if all(Fraction(x) == 0 for x in nu):
            raise ValueError("direction must be nonzero")
        geom = box(2, L) if geometry == "box" else cylinder(L, L)
        if zero_rule == "half_space":
            z = half_space(geom, nu, alpha, center=geometry == "box")
        elif zero_rule == "quadrant_cover":
            z = quadrant_cover(geom, nu, alpha)
        else:
            raise ValueError(f"unknown zero rule {zero_rule!r}")
        sol = continuation_dimension(problem(geom, z, potential, energy))
        rows.append({"direction": [str(Fraction(x)) for x in nu], "geometry": geom.describe(),
                     "zero_sites": len(z), "dimension": sol.dimension})
    return rows


# ---------------------------------------------------------------------------
# finitely supported eigenfunctions


@dataclass
class WitnessResult:
    exists: bool
    dimension: int
    witness: list
    support: list = field(default_factory=list)
    collar: list = field(default_factory=list)


def collar_of(g: Graph, support: VertexSet) -> VertexSet:
    out = set()
    for v in support:
        for w in g.adjacency[v]:
            if w not in support:
                out.add(w)
    return VertexSet(g.n, out)


def finitely_supported_eigenfunction_exists(g: Graph, spec: OperatorSpec, energy,
                                            support_bound: VertexSet) -> WitnessResult:
    """Look for an eigenfunction at ``energy`` supported inside ``support_bound``.

    Unknowns live on ``support_bound``; the function is zero on its
    distance-one collar and beyond. The eigen-equation is enforced on the
    support and on the collar. Every support vertex must have its full
    lattice neighborhood inside ``g`` so that the enforced rows are rows of
    the infinite operator.
    """
    if support_bound.n != g.n:
        raise ValueError("support set does not match the graph")
    for v in support_bound:
        if not g.is_full(v):
            raise ValueError(f"support vertex {v} lacks part of its lattice neighborhood")
    op = build_operator(g, spec).shifted(Fraction(energy))
    collar = collar_of(g, support_bound)
    cols = [int(v) for v in support_bound.indices()]
    rows = cols + [int(v) for v in collar.indices()]
    if not cols:
        return WitnessResult(False, 0, [], [], [])
    dim, basis = rational_kernel(op.submatrix(rows, cols))
    witness = []
    for vec in basis:
        full = [Fraction(0)] * g.n
        for k, v in enumerate(cols):
            full[v] = vec[k]
        witness.append(full)
    return WitnessResult(dim > 0, dim, witness, cols, [int(v) for v in collar.indices()])


def interior_support(g: Graph) -> VertexSet:
    """Vertices whose full lattice neighborhood lies in ``g``."""
    return VertexSet(g.n, [v for v in range(g.n) if g.is_full(v)])


# ---------------------------------------------------------------------------
# boundary determination


def rational_candidates(values, max_den: int = 12, tol: float = 1e-9) -> list:
    """Small-denominator rationals within ``tol`` of some value (deduplicated, sorted)."""
    out = set()
    for x in values:
        q = Fraction(float(x)).limit_denominator(max_den)
        if abs(float(q) - float(x)) <= tol:
            out.add(q)
    return sorted(out)


def float_multiplicities(ev: np.ndarray, tol: float = 1e-8) -> list:
    """``(value, multiplicity)`` clusters of a sorted float spectrum."""
    out = []
    start = 0
    for k in range(1, ev.size + 1):
        if k == ev.size or ev[k] - ev[k - 1] > tol:
            out.append((float(ev[start:k].mean()), k - start))
            start = k
    return out


def boundary_determination_bound(L: int, potential=None, exact_energies=None, d: int = 2) -> dict:
    """Eigenvalue multiplicities of ``-Delta + V`` on a box against ``|collar_2|``.

    Exact multiplicities come from rational kernels at each energy in
    ``exact_energies`` (default: every rational eigenvalue with denominator
    at most 12, located from the float spectrum and confirmed exactly).
    Irrational eigenvalues are covered by float clusters at tolerance 1e-8.
    """
    if L < 5:
        raise ValueError("need L >= 5")
    g = zd_box(d, L)
    n = g.n
    if potential is None:
        potential = tuple(Fraction(0) for _ in range(n))
    op = build_operator(g, OperatorSpec("schrodinger", potential=tuple(potential)))
    ev = np.linalg.eigvalsh(op.to_float())
    if exact_energies is None:
        exact_energies = rational_candidates(ev)
    _, collar_size = boundary_collar(L, d, 2)
    exact = {}
    for e in exact_energies:
        dim, _ = rational_kernel(op.shifted(Fraction(e)))
        exact[Fraction(e)] = dim
    clusters = float_multiplicities(np.sort(ev))
    max_exact = max(exact.values(), default=0)
    max_float = max((m for _, m in clusters), default=0)
    return {
        "L": L,
        "d": d,
        "sites": n,
        "collar_size": collar_size,
        "exact_multiplicities": {str(k): v for k, v in sorted(exact.items())},
        "max_exact_multiplicity": max_exact,
        "max_float_multiplicity": max_float,
        "bound_holds": max(max_exact, max_float) <= collar_size,
        "max_multiplicity_per_site": max(max_exact, max_float) / n,
        "all_simple": max_float == 1,
    }
