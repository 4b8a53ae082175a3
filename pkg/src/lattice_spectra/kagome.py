"""Hexagon eigenfunctions of the Kagome normalized Laplacian and the Kagome IDS.

For a hexagon ``H`` with vertices ``x_k = z0 + exp(i k pi/3)`` the function
``F_H`` equal to ``(-1)^k`` at ``x_k`` and zero elsewhere satisfies
``Delta_K F_H = 3/2 F_H`` for the positive semidefinite normalized
Laplacian ``Delta_K f(x) = (1/4) sum_{y ~ x} (f(x) - f(y))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .continuation import finitely_supported_eigenfunction_exists, rational_candidates
from .graph import VertexSet
from .lattices import KagomePatch, kagome_patch
from .linalg import RationalMatrix, rational_kernel, rational_rank
from .operators import CountingFunction, OperatorSpec, build_operator, operator_counting

KAGOME_ENERGY = Fraction(3, 2)
_LAPLACIAN = OperatorSpec("normalized_laplacian")


class BoundaryHexagonError(ValueError):
    pass


@dataclass(frozen=True)
class HexagonFunction:
    patch: KagomePatch
    hexagon: int
    values: tuple

    @property
    def support(self) -> list:
        return [v for v, x in enumerate(self.values) if x != 0]

    def residual(self, energy=KAGOME_ENERGY) -> list:
        """Exact ``(Delta_K - E) F_H`` at every patch vertex."""
        op = build_operator(self.patch.graph, _LAPLACIAN)
        image = op.matvec(list(self.values))
        return [a - Fraction(energy) * b for a, b in zip(image, self.values)]

    def verify(self, energy=KAGOME_ENERGY) -> bool:
        return all(r == 0 for r in self.residual(energy))


def hexagon_eigenfunction(patch: KagomePatch, h: int, check: bool = True) -> HexagonFunction:
    """``F_H`` for an interior hexagon (all six vertices of full degree 4)."""
    if not 0 <= h < len(patch.hexagons):
        raise IndexError(f"hexagon {h} out of range")
    if not patch.is_interior_hexagon(h):
        raise BoundaryHexagonError(f"hexagon {h} touches the patch boundary")
    values = [Fraction(0)] * patch.graph.n
    for k, v in enumerate(patch.hexagons[h]):
        values[v] = Fraction((-1) ** k)
    f = HexagonFunction(patch, h, tuple(values))
    if check and not f.verify():
        raise AssertionError(f"hexagon {h} violates the eigen-equation")
    return f


def hexagon_family_rank(patch: KagomePatch, hexagon_ids: Sequence[int]) -> int:
    """Exact rank of the ``F_H`` value vectors."""
    ids = list(hexagon_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate hexagon ids")
    if not ids:
        return 0
    rows = [hexagon_eigenfunction(patch, h, check=False).values for h in ids]
    return rational_rank(RationalMatrix.from_dense(rows))


def kagome_operator(L: int, boundary: str = "simple"):
    """``(patch, exact matrix, kept vertex indices)`` for ``Delta_K`` on ``Lambda_{Q,L}``.

    ``simple`` keeps every patch vertex with full-lattice coefficients;
    ``dirichlet_delete`` also drops the vertices of degree below 4.
    """
    patch = kagome_patch(L)
    m = build_operator(patch.graph, _LAPLACIAN)
    if boundary == "simple":
        keep = list(range(patch.graph.n))
    elif boundary == "dirichlet_delete":
        keep = [v for v in range(patch.graph.n) if patch.graph.degree(v) == 4]
        m = m.submatrix(keep, keep)
    else:
        raise ValueError(f"unknown boundary convention {boundary!r}")
    return patch, m, keep


def kagome_counting(L: int, boundary: str = "simple", method: str = "householder-ql") -> CountingFunction:
    """Counting function of ``Delta_K`` on the patch, normalized by ``3 L^2``."""
    if L < 2:
        raise ValueError("need L >= 2")
    _, m, _ = kagome_operator(L, boundary)
    return operator_counting(m, 3 * L * L, exact_energies=[KAGOME_ENERGY], method=method)


def trace_formula_ids(L: int, energies: Sequence[float], cells: str = "interior") -> np.ndarray:
    """IDS from the spectral projector restricted to fundamental cells.

    Averages ``(1/3) trace(chi_Q P_E chi_Q)`` over the chosen cells, where
    ``P_E`` is the spectral projector of the patch operator onto
    eigenvalues ``<= E``. ``cells="interior"`` uses cells away from the
    rim; ``"center"`` uses the single middle cell.
    """
    patch, m, _ = kagome_operator(L)
    a = m.to_float()
    # the normalized Laplacian is similar to a symmetric matrix; on a
    # lattice patch the full degree is constant, so ``a`` is already symmetric
    w, v = np.linalg.eigh((a + a.T) / 2)
    if cells == "center":
        chosen = [((L - 1) // 2, (L - 1) // 2)]
    elif cells == "interior":
        chosen = [c for c in patch.cells if all(1 <= x <= L - 2 for x in c)] or list(patch.cells)
    else:
        raise ValueError(f"unknown cell selection {cells!r}")
    index = {c: k for k, c in enumerate(patch.cells)}
    rows = [u for c in chosen for u in patch.cell_vertices[index[c]]]
    weights = (v[rows, :] ** 2).sum(axis=0) / len(rows)
    out = []
    for e in energies:
        out.append(float(weights[w <= e + 1e-12].sum()))
    return np.array(out)


def trace_formula_comparison(L: int, grid: Sequence[float] | None = None, cells: str = "interior",
                             exclude: float = 0.15) -> dict:
    """Sup-distance between the cell-trace IDS and the counting function.

    Near ``3/2`` the counting function is short of the full jump by the
    boundary-hexagon deficit, so the distance is also reported with energies
    within ``exclude`` of ``3/2`` removed.
    """
    grid = np.linspace(-0.1, 2.0, 2101) if grid is None else np.asarray(grid, dtype=float)
    n = kagome_counting(L, method="lapack")
    diff = np.abs(trace_formula_ids(L, grid, cells) - n.evaluate(grid + 1e-12))
    away = np.abs(grid - 1.5) >= exclude
    return {
        "L": L,
        "cells": cells,
        "max_difference": float(diff.max()),
        "mean_difference": float(diff.mean()),
        "max_difference_away_from_3_2": float(diff[away].max()) if away.any() else 0.0,
        "worst_energy": float(grid[diff.argmax()]),
    }


def eigenvalue_rigidity_check(patch: KagomePatch, energies: Sequence | None = None) -> dict:
    """Scan energies for finitely supported eigenfunctions inside the patch.

    The support bound is the set of degree-4 vertices (full lattice
    neighborhood); witnesses are checked for membership in the exact span
    of all hexagon functions of the patch (interior and rim hexagons).
    """
    g = patch.graph
    if energies is None:
        cands = {Fraction(p, q) for q in range(1, 13) for p in range(0, 2 * q + 1)}
        ev = np.linalg.eigvalsh(build_operator(g, _LAPLACIAN).to_float())
        cands.update(rational_candidates(ev))
        energies = sorted(cands)
    support = VertexSet(g.n, [v for v in range(g.n) if g.is_full(v)])
    hex_rows = []
    for hexagon in patch.hexagons:
        row = [Fraction(0)] * g.n
        for k, v in enumerate(hexagon):
            row[v] = Fraction((-1) ** k)
        hex_rows.append(row)
    hex_rank = rational_rank(RationalMatrix.from_dense(hex_rows)) if hex_rows else 0
    interior = patch.interior_hexagons()
    found = []
    in_span = True
    for e in energies:
        res = finitely_supported_eigenfunction_exists(g, _LAPLACIAN, Fraction(e), support)
        if not res.exists:
            continue
        found.append({"energy": Fraction(e), "dimension": res.dimension})
        for vec in res.witness:
            r = rational_rank(RationalMatrix.from_dense(hex_rows + [vec]))
            if r != hex_rank:
                in_span = False
    return {
        "L": patch.L,
        "interior_hexagons": len(interior),
        "patch_hexagons": len(patch.hexagons),
        "energies_scanned": len(energies),
        "witness_energies": [w["energy"] for w in found],
        "witness_dimensions": {str(w["energy"]): w["dimension"] for w in found},
        "only_three_halves": all(w["energy"] == KAGOME_ENERGY for w in found),
        "witnesses_in_hexagon_span": in_span,
    }


def kagome_report(L: int, boundary: str = "simple") -> dict:
    patch, m, _ = kagome_operator(L, boundary)
    n = kagome_counting(L, boundary)
    mult = n.exact_multiplicities[KAGOME_ENERGY]
    jump = Fraction(mult) / n.normalization
    interior = patch.interior_hexagons()
    return {
        "L": L,
        "boundary": boundary,
        "vertices": patch.graph.n,
        "matrix_order": m.rows,
        "normalization": n.normalization,
        "multiplicity_at_3_2": mult,
        "jump_at_3_2_exact": jump,
        "N_at_3_2_exact": n.exact_value(KAGOME_ENERGY),
        "interior_hexagons": len(interior),
        "interior_hexagon_rank": hexagon_family_rank(patch, interior),
        "max_eigenvalue": float(n.eigenvalues.max()),
        "cluster_consistent": n.cluster_consistent(KAGOME_ENERGY),
    }


def null_space_dimension(m: RationalMatrix, e) -> int:
    dim, _ = rational_kernel(m.shifted(Fraction(e)))
    return dim
