"""Dense symmetric eigenvalues and exact rational rank/kernel computations.

Two regimes on purpose: floating point for whole spectra (Householder
tridiagonalization followed by implicit-shift QL), exact integers and
fractions wherever a multiplicity or a kernel is claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class ConvergenceError(RuntimeError):
    """QL iteration failed to deflate an eigenvalue."""

    def __init__(self, index: int, iterations: int):
        super().__init__(f"QL iteration stuck at index {index} after {iterations} sweeps")
        self.index = index
        self.iterations = iterations


# ---------------------------------------------------------------------------
# exact matrices


class RationalMatrix:
    """Sparse-by-row matrix of :class:`fractions.Fraction` entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [dict() for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count mismatch")
        clean = []
        for r in data:
            row = {}
            for c, v in r.items():
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range")
                v = Fraction(v)
                if v:
                    row[c] = v
            clean.append(row)
        self.data = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [{c: v for c, v in enumerate(r) if v} for r in rows])

    @classmethod
    def identity(cls, n: int, scale=1) -> "RationalMatrix":
        return cls(n, n, [{i: scale} for i in range(n)])

    @classmethod
    def vstack(cls, blocks: Iterable["RationalMatrix"]) -> "RationalMatrix":
        blocks = list(blocks)
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("column counts differ")
        data = [dict(r) for b in blocks for r in b.data]
        return cls(len(data), cols, data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i].get(j, Fraction(0))

    def to_dense(self) -> list:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                out[i][j] = v
        return out

    def to_float(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols))
        for i, r in enumerate(self.data):
            for j, v in r.items():
                a[i, j] = float(v)
        return a

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[j].get(i) == v for i, r in enumerate(self.data) for j, v in r.items())

    def transpose(self) -> "RationalMatrix":
        data = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                data[j][i] = v
        return RationalMatrix(self.cols, self.rows, data)

    def shifted(self, e) -> "RationalMatrix":
        """``A - e*I`` for square ``A``."""
        if self.rows != self.cols:
            raise ValueError("shift needs a square matrix")
        e = Fraction(e)
        data = [dict(r) for r in self.data]
        for i in range(self.rows):
            data[i][i] = data[i].get(i, Fraction(0)) - e
        return RationalMatrix(self.rows, self.cols, data)

    def scaled(self, s) -> "RationalMatrix":
        s = Fraction(s)
        return RationalMatrix(self.rows, self.cols, [{j: v * s for j, v in r.items()} for r in self.data])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        cmap = {c: k for k, c in enumerate(cols)}
        data = []
        for i in rows:
            data.append({cmap[j]: v for j, v in self.data[i].items() if j in cmap})
        return RationalMatrix(len(rows), len(cols), data)

    def matvec(self, x: Sequence) -> list:
        if len(x) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((v * x[j] for j, v in r.items()), Fraction(0)) for r in self.data]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    def __repr__(self):
        nnz = sum(len(r) for r in self.data)
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={nnz})"


def _integer_rows(a: RationalMatrix) -> list:
    """Scale each row by the lcm of its denominators; returns dict rows of ints."""
    out = []
    for r in a.data:
        if not r:
            out.append({})
            continue
        den = 1
        for v in r.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append({j: int(v * den) for j, v in r.items()})
    return out


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


@dataclass
class Echelon:
    """Row echelon data: pivot column and its integer row, in pivot order."""

    cols: int
    pivots: list  # list of (pivot column, {col: int})

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list:
        used = {c for c, _ in self.pivots}
        return [c for c in range(self.cols) if c not in used]

    def kernel_basis(self) -> list:
        """One exact kernel vector per free column (value 1 there, 0 on other free columns)."""
        order = sorted(self.pivots, key=lambda p: p[0], reverse=True)
        basis = []
        for f in self.free_columns():
            x = {f: Fraction(1)}
            for c, row in order:
                s = Fraction(0)
                for j, v in row.items():
                    if j != c and j in x:
                        s += v * x[j]
                if s:
                    x[c] = -s / row[c]
            vec = [Fraction(0)] * self.cols
            for j, v in x.items():
                vec[j] = v
            basis.append(vec)
        return basis


def sparse_echelon(a: RationalMatrix) -> Echelon:
    """Fraction-free elimination on sparse integer rows.

    Rows are cleared of denominators, then eliminated column by column with
    ``r <- p*r - q*pivot_row`` followed by division by the row content, so
    every intermediate stays an integer vector. Only rows with a nonzero in
    the pivot column are touched. The pivot is the candidate row with the
    fewest nonzeros, ties broken by the smallest pivot magnitude.
    """
    rows = _integer_rows(a)
    col_rows: dict = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    active = set(i for i, r in enumerate(rows) if r)
    pivots = []
    for c in range(a.cols):
        cand = col_rows.get(c)
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(rows[i]), abs(rows[i][c]), i))
        prow = rows[p]
        active.discard(p)
        for j in prow:
            col_rows[j].discard(p)
        pv = prow[c]
        for s in list(cand):
            srow = rows[s]
            sv = srow[c]
            g = math.gcd(pv, sv)
            mp, ms = pv // g, sv // g
            new = {j: v * mp for j, v in srow.items()}
            for j, v in prow.items():
                w = new.get(j, 0) - ms * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            new = _primitive(new)
            for j in srow:
                if j not in new:
                    col_rows[j].discard(s)
            for j in new:
                if j not in srow:
                    col_rows.setdefault(j, set()).add(s)
            rows[s] = new
            if not new:
                active.discard(s)
        pivots.append((c, prow))
    return Echelon(a.cols, pivots)


def bareiss_echelon(a: RationalMatrix) -> Echelon:
    """Dense Bareiss elimination (one-step fraction-free).

    Partial pivoting picks, within the pivot column, the nonzero entry of
    smallest absolute value to limit coefficient growth.
    """
    m = [[r.get(j, 0) for j in range(a.cols)] for r in _integer_rows(a)]
    nrows, ncols = a.rows, a.cols
    prev = 1
    rank = 0
    pivots = []
    for c in range(ncols):
        if rank == nrows:
            break
        best = None
        for i in range(rank, nrows):
            if m[i][c] and (best is None or abs(m[i][c]) < abs(m[best][c])):
                best = i
        if best is None:
            continue
        m[rank], m[best] = m[best], m[rank]
        piv_row = m[rank]
        p = piv_row[c]
        for i in range(rank + 1, nrows):
            row = m[i]
            q = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - q * piv_row[j]) // prev
            row[c] = 0
        pivots.append((c, {j: piv_row[j] for j in range(c, ncols) if piv_row[j]}))
        prev = p
        rank += 1
    return Echelon(ncols, pivots)


def _echelon(a: RationalMatrix, method: str) -> Echelon:
    if method == "sparse":
        return sparse_echelon(a)
    if method == "bareiss":
        return bareiss_echelon(a)
    raise ValueError(f"unknown elimination method {method!r}")


def rational_kernel(a: RationalMatrix, method: str = "sparse"):
    """Exact kernel of ``a``.

    Returns
    -------
    dimension : int
        ``cols - rank``.
    basis : list of list of Fraction
        Kernel vectors, each verified to satisfy ``a @ v == 0`` exactly.
    """
    ech = _echelon(a, method)
    basis = ech.kernel_basis()
    for v in basis:
        if any(a.matvec(v)):
            raise ArithmeticError("kernel vector failed exact verification")
    return a.cols - ech.rank, basis


def rational_rank(a: RationalMatrix, method: str = "sparse") -> int:
    return _echelon(a, method).rank


# ---------------------------------------------------------------------------
# floating point symmetric eigenvalues


class SymmetricMatrix:
    """Real symmetric matrix stored as its packed lower triangle (row-major)."""

    __slots__ = ("order", "packed")

    def __init__(self, order: int, packed):
        packed = np.asarray(packed, dtype=float)
        if packed.shape != (order * (order + 1) // 2,):
            raise ValueError("packed length does not match order")
        self.order = order
        self.packed = packed

    @classmethod
    def from_dense(cls, a) -> "SymmetricMatrix":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("need a square matrix")
        rows, cols = np.tril_indices(a.shape[0])
        return cls(a.shape[0], a[rows, cols])

    @classmethod
    def from_rational(cls, m: RationalMatrix) -> "SymmetricMatrix":
        if not m.is_symmetric():
            raise ValueError("matrix is not exactly symmetric")
        return cls.from_dense(m.to_float())

    def to_dense(self) -> np.ndarray:
        n = self.order
        a = np.zeros((n, n))
        rows, cols = np.tril_indices(n)
        a[rows, cols] = self.packed
        a[cols, rows] = self.packed
        return a

    def norm_inf(self) -> float:
        if self.order == 0:
            return 0.0
        return float(np.abs(self.to_dense()).sum(axis=1).max())


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    residual_bound: float

    def __len__(self):
        return len(self.eigenvalues)

    def to_json(self) -> list:
        return [float(x) for x in self.eigenvalues]


def householder_tridiagonal(a: np.ndarray):
    """Reduce a symmetric matrix to tridiagonal form by Householder reflections.

    Returns the diagonal ``d`` and subdiagonal ``e`` (``e[0]`` unused, zero).
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            e[k + 1] = 0.0
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        vnorm2 = v @ v
        if vnorm2 == 0.0:
            e[k + 1] = x[0]
            continue
        sub = a[k + 1:, k + 1:]
        p = sub @ v * (2.0 / vnorm2)
        kcoef = (v @ p) / vnorm2
        w = p - kcoef * v
        sub -= np.outer(v, w) + np.outer(w, v)
        a[k + 1:, k + 1:] = sub
        e[k + 1] = alpha
    for k in range(n):
        d[k] = a[k, k]
    if n >= 2:
        e[n - 1] = a[n - 1, n - 2]
    return d, e


def tridiagonal_ql(d, e, max_sweeps: int | None = None) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.

    ``d`` is the diagonal, ``e[1:]`` the subdiagonal. Deflation uses
    ``|e_m| <= 1e-14 (|d_m| + |d_{m+1}|)``.
    """
    d = [float(x) for x in d]
    n = len(d)
    e = [float(x) for x in e[1:]] + [0.0]
    if max_sweeps is None:
        max_sweeps = 30 * max(n, 1)
    sweeps = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 1e-14 * dd or abs(e[m]) < 1e-300:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError(l, sweeps)
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(sorted(d))


def sym_eigenvalues(a, method: str = "householder-ql") -> Spectrum:
    """All eigenvalues of a real symmetric matrix, ascending.

    Parameters
    ----------
    a : SymmetricMatrix or array_like
        Dense arrays are read through their lower triangle.
    method : {"householder-ql", "lapack"}
        The in-house Householder/QL route, or LAPACK ``syevd`` through
        :func:`numpy.linalg.eigvalsh` for large batches.
    """
    if not isinstance(a, SymmetricMatrix):
        a = SymmetricMatrix.from_dense(a)
    n = a.order
    if n < 1:
        raise ValueError("empty matrix")
    dense = a.to_dense()
    if not np.all(np.isfinite(dense)):
        raise ValueError("matrix has non-finite entries")
    bound = 1e-9 * max(1.0, a.norm_inf())
    if method == "lapack":
        return Spectrum(np.linalg.eigvalsh(dense), bound)
    if method != "householder-ql":
        raise ValueError(f"unknown eigensolver {method!r}")
    if n == 1:
        return Spectrum(np.array([dense[0, 0]]), bound)
    d, e = householder_tridiagonal(dense)
    return Spectrum(tridiagonal_ql(d, e), bound)


def inverse_iteration_residual(a, lam: float, iterations: int = 3, seed: int = 0) -> float:
    """Residual ``||A v - lam v||`` of the unit vector found by inverse iteration at ``lam``."""
    if isinstance(a, SymmetricMatrix):
        a = a.to_dense()
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    shift = lam + 1e-10 * max(1.0, abs(lam))
    m = a - shift * np.eye(n)
    for _ in range(iterations):
        try:
            w = np.linalg.solve(m, v)
        except np.linalg.LinAlgError:
            w, *_ = np.linalg.lstsq(m, v, rcond=None)
        norm = np.linalg.norm(w)
        if norm == 0.0 or not np.isfinite(norm):
            break
        v = w / norm
    return float(np.linalg.norm(a @ v - lam * v))


def spot_check(a, spectrum: Spectrum, samples: int = 5, seed: int = 0) -> float:
    """Largest inverse-iteration residual over a seeded sample of eigenvalues."""
    rng = np.random.default_rng(seed)
    n = len(spectrum)
    picks = rng.choice(n, size=min(samples, n), replace=False)
    return max(inverse_iteration_residual(a, float(spectrum.eigenvalues[k]), seed=int(k)) for k in picks)
