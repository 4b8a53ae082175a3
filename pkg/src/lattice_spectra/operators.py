"""Graph operators, simple-boundary restrictions and eigenvalue counting functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, VertexSet
from .linalg import RationalMatrix, SymmetricMatrix, rational_kernel, sym_eigenvalues

KINDS = ("adjacency", "combinatorial_laplacian", "normalized_laplacian", "schrodinger")

# eigenvalues closer than this to an exact energy are attributed to it
CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class OperatorSpec:
    """What to assemble on a graph.

    ``combinatorial_laplacian`` is ``-Delta`` (positive semidefinite),
    ``normalized_laplacian`` is ``Delta_G`` with ``(f(x) - f(y))``
    differences (also positive semidefinite) and ``schrodinger`` is
    ``-Delta + V``. Diagonal degrees come from :meth:`Graph.full_degree`,
    so lattice patches keep their full-lattice coefficients.
    """

    kind: str
    potential: tuple | None = None
    energy_shift: Fraction | None = None
    sign: str = "as_defined"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.sign not in ("as_defined", "negated"):
            raise ValueError(f"unknown sign convention {self.sign!r}")


def build_operator(g: Graph, spec: OperatorSpec) -> RationalMatrix:
    """Exact matrix of the operator described by ``spec`` on ``g``."""
    n = g.n
    if spec.potential is not None and len(spec.potential) != n:
        raise ValueError("potential length does not match the graph")
    data = [dict() for _ in range(n)]
    for i in range(n):
        nbrs = g.adjacency[i]
        row = data[i]
        if spec.kind == "adjacency":
            for j in nbrs:
                row[j] = Fraction(1)
        elif spec.kind == "normalized_laplacian":
            deg = g.full_degree(i)
            if deg == 0:
                raise ValueError(f"normalized Laplacian undefined at isolated vertex {i}")
            row[i] = Fraction(1)
            for j in nbrs:
                row[j] = Fraction(-1, deg)
        else:
            row[i] = Fraction(g.full_degree(i))
            for j in nbrs:
                row[j] = Fraction(-1)
        if spec.potential is not None:
            row[i] = row.get(i, Fraction(0)) + Fraction(spec.potential[i])
        if spec.energy_shift is not None:
            row[i] = row.get(i, Fraction(0)) - Fraction(spec.energy_shift)
    m = RationalMatrix(n, n, data)
    if spec.sign == "negated":
        m = m.scaled(-1)
    return m


def restrict_simple(m: RationalMatrix, g: Graph, s: VertexSet) -> RationalMatrix:
    """Principal submatrix on ``s`` (simple boundary conditions)."""
    if s.n != g.n or m.rows != g.n:
        raise ValueError("vertex set, graph and matrix orders differ")
    if len(s) == 0:
        raise ValueError("restriction to the empty set")
    idx = [int(i) for i in s.indices()]
    return m.submatrix(idx, idx)


def exact_multiplicity(m: RationalMatrix, e) -> int:
    """Exact multiplicity of ``e`` as an eigenvalue of the symmetric matrix ``m``."""
    dim, _ = rational_kernel(m.shifted(e))
    return dim


@dataclass
class CountingFunction:
    """Normalized eigenvalue counting function ``E -> #{lambda <= E} / normalization``.

    ``exact_multiplicities`` maps rational energies to exact multiplicities;
    at those energies the float eigenvalues within :data:`CLUSTER_TOL` are
    replaced by the exact count.
    """

    eigenvalues: np.ndarray
    normalization: Fraction
    exact_multiplicities: dict = field(default_factory=dict)

    def __post_init__(self):
        self.eigenvalues = np.sort(np.asarray(self.eigenvalues, dtype=float))
        self.normalization = Fraction(self.normalization)
        if self.normalization <= 0:
            raise ValueError("normalization must be positive")
        self.exact_multiplicities = {Fraction(k): int(v) for k, v in self.exact_multiplicities.items()}

    @property
    def total(self) -> int:
        return int(self.eigenvalues.size)

    def count(self, e) -> int:
        """Number of eigenvalues ``<= e`` (exact at energies with known multiplicity)."""
        if isinstance(e, (Fraction, int)) and Fraction(e) in self.exact_multiplicities:
            x = float(e)
            below = int(np.searchsorted(self.eigenvalues, x - CLUSTER_TOL * max(1.0, abs(x)), side="left"))
            return below + self.exact_multiplicities[Fraction(e)]
        return int(np.searchsorted(self.eigenvalues, float(e), side="right"))

    def exact_value(self, e) -> Fraction:
        return Fraction(self.count(e)) / self.normalization

    def __call__(self, e) -> float:
        return self.count(e) / float(self.normalization)

    def evaluate(self, grid: Sequence[float]) -> np.ndarray:
        counts = np.searchsorted(self.eigenvalues, np.asarray(grid, dtype=float), side="right")
        return counts / float(self.normalization)

    def cluster_count(self, e: float, tol: float) -> int:
        lo = np.searchsorted(self.eigenvalues, e - tol, side="left")
        hi = np.searchsorted(self.eigenvalues, e + tol, side="right")
        return int(hi - lo)

    def cluster_consistent(self, e) -> bool:
        """Float cluster at ``e`` has exactly the exact multiplicity."""
        x = float(e)
        return self.cluster_count(x, CLUSTER_TOL * max(1.0, abs(x))) == self.exact_multiplicities[Fraction(e)]

    def jump_points(self, lo: float = -np.inf, hi: float = np.inf) -> np.ndarray:
        ev = self.eigenvalues
        ev = ev[(ev >= lo) & (ev <= hi)]
        if ev.size == 0:
            return ev
        keep = np.concatenate([[True], np.diff(ev) > 1e-12])
        return ev[keep]

    def csv_rows(self, grid: Sequence[float]) -> list:
        """``(E, N(E))`` at every jump point inside the grid range plus the grid itself."""
        grid = np.asarray(grid, dtype=float)
        pts = np.union1d(grid, self.jump_points(grid.min(), grid.max())) if grid.size else grid
        return list(zip(pts.tolist(), self.evaluate(pts).tolist()))


def counting_function(eigenvalues: Iterable[float], normalization, exact_multiplicities=None) -> CountingFunction:
    return CountingFunction(np.fromiter(eigenvalues, dtype=float), Fraction(normalization),
                            dict(exact_multiplicities or {}))


def operator_counting(m: RationalMatrix, normalization, exact_energies: Iterable = (),
                      method: str = "householder-ql") -> CountingFunction:
    """Counting function of a symmetric exact matrix.

    Float eigenvalues come from :func:`sym_eigenvalues`; each energy in
    ``exact_energies`` gets its multiplicity from an exact kernel.
    """
    if m.rows == 0:
        ev = np.zeros(0)
    else:
        ev = sym_eigenvalues(SymmetricMatrix.from_rational(m), method=method).eigenvalues
    exact = {Fraction(e): exact_multiplicity(m, e) for e in exact_energies}
    return CountingFunction(ev, Fraction(normalization), exact)


class MissingExactData(LookupError):
    pass


def jump_at(n: CountingFunction, e, mode: str = "exact", tol: float = 1e-9):
    """Size of the jump of ``n`` at ``e``.

    ``mode="exact"`` returns ``multiplicity / normalization`` as a Fraction
    and needs ``e`` among the exact multiplicities; ``mode="cluster"``
    counts float eigenvalues within ``tol`` of ``e``.
    """
    if mode == "exact":
        key = Fraction(e)
        if key not in n.exact_multiplicities:
            raise MissingExactData(
                f"no exact multiplicity at {key}; compute it with rational_kernel(A - E*I) first"
            )
        return Fraction(n.exact_multiplicities[key]) / n.normalization
    if mode == "cluster":
        return n.cluster_count(float(e), tol) / float(n.normalization)
    raise ValueError(f"unknown jump mode {mode!r}")


def validate_step_rows(rows: Sequence[tuple]) -> None:
    """Raise if CSV rows are not sorted by energy with nondecreasing values."""
    last_e, last_n = -np.inf, -np.inf
    for e, v in rows:
        if e < last_e or v < last_n - 1e-15:
            raise ValueError(f"counting function rows not monotone at E={e}")
        last_e, last_n = e, v
