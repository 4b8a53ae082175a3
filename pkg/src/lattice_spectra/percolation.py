"""Site percolation on Z^d boxes: samples, cluster spectra, lattice animals.

Random numbers come from numpy's Philox4x64-10 counter-based generator keyed
by the 64-bit seed, so every sample is reproducible bit for bit from
``(L, d, p, seed)`` on any platform numpy supports.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graph import Graph, VertexSet, connected_components, induced_subgraph
from .lattices import zd_box
from .linalg import sym_eigenvalues
from .operators import CountingFunction

PRNG_NAME = "numpy.random.Philox(key=seed) [Philox4x64-10], uniform doubles via Generator.random"
SEED_MASK = (1 << 64) - 1
MAX_ANIMAL_SIZE = 8
FREE_POLYOMINO_COUNTS = (1, 1, 2, 5, 12, 35, 108, 369)
DEDUP_TOL = 1e-9


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & SEED_MASK))


@dataclass(frozen=True)
class PercolationSample:
    L: int
    d: int
    p: float
    seed: int
    active: VertexSet

    @property
    def active_fraction(self) -> float:
        return len(self.active) / self.active.n


def sample_sites(L: int, d: int, p: float, seed: int) -> PercolationSample:
    """Each site of the box is active independently with probability ``p``."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    u = philox(seed).random(L ** d)
    return PercolationSample(L, d, float(p), int(seed) & SEED_MASK, VertexSet.from_mask(u < p))


@lru_cache(maxsize=8)
def _box(d: int, L: int) -> Graph:
    return zd_box(d, L)


def clusters(sample: PercolationSample):
    """Active subgraph and its clusters (lists of subgraph indices, ordered by smallest site)."""
    sub, new_to_old, _ = induced_subgraph(_box(sample.d, sample.L), sample.active)
    return sub, new_to_old, connected_components(sub)


def _cluster_adjacency(sub: Graph, comp: Sequence[int]) -> np.ndarray:
    pos = {v: k for k, v in enumerate(comp)}
    a = np.zeros((len(comp), len(comp)))
    for v in comp:
        for w in sub.adjacency[v]:
            a[pos[v], pos[w]] = 1.0
    return a


def _cluster_key(sub: Graph, comp: Sequence[int]):
    """Edge-structure key for small clusters so repeated shapes are diagonalized once."""
    pos = {v: k for k, v in enumerate(comp)}
    return tuple(sorted((pos[v], pos[w]) for v in comp for w in sub.adjacency[v] if pos[v] < pos[w]))


def cluster_spectra(sample: PercolationSample, method: str = "lapack") -> list:
    """Adjacency eigenvalues of each cluster, in cluster order."""
    sub, _, comps = clusters(sample)
    cache = {}
    out = []
    for comp in comps:
        if len(comp) == 1:
            out.append(np.zeros(1))
            continue
        key = (len(comp), _cluster_key(sub, comp)) if len(comp) <= 12 else None
        if key is not None and key in cache:
            out.append(cache[key])
            continue
        ev = sym_eigenvalues(_cluster_adjacency(sub, comp), method=method).eigenvalues
        if key is not None:
            cache[key] = ev
        out.append(ev)
    return out


def percolation_counting(sample: PercolationSample, method: str = "lapack") -> CountingFunction:
    """Counting function of the active-site adjacency operator, normalized by ``L^d``."""
    spectra = cluster_spectra(sample, method=method)
    ev = np.concatenate(spectra) if spectra else np.zeros(0)
    return CountingFunction(ev, Fraction(sample.L ** sample.d))


# ---------------------------------------------------------------------------
# lattice animals


_SYMMETRIES = (
    lambda x, y: (x, y), lambda x, y: (-x, y), lambda x, y: (x, -y), lambda x, y: (-x, -y),
    lambda x, y: (y, x), lambda x, y: (-y, x), lambda x, y: (y, -x), lambda x, y: (-y, -x),
)


def _normalize(cells) -> tuple:
    mx = min(c[0] for c in cells)
    my = min(c[1] for c in cells)
    return tuple(sorted((x - mx, y - my) for x, y in cells))


def canonical_form(cells) -> tuple:
    """Lexicographically least translate over the eight symmetries of Z^2."""
    return min(_normalize([t(x, y) for x, y in cells]) for t in _SYMMETRIES)


@dataclass(frozen=True)
class LatticeAnimal:
    cells: tuple

    @property
    def size(self) -> int:
        return len(self.cells)

    def adjacency(self) -> np.ndarray:
        pos = {c: k for k, c in enumerate(self.cells)}
        a = np.zeros((self.size, self.size))
        for (x, y), k in pos.items():
            for nb in ((x + 1, y), (x, y + 1)):
                j = pos.get(nb)
                if j is not None:
                    a[k, j] = a[j, k] = 1.0
        return a


def enumerate_lattice_animals(max_size: int) -> list:
    """All free polyominoes with at most ``max_size`` cells, by size then canonical form."""
    if max_size > MAX_ANIMAL_SIZE:
        raise ValueError(f"max_size is capped at {MAX_ANIMAL_SIZE}")
    if max_size < 1:
        return []
    level = {((0, 0),)}
    out = [LatticeAnimal(((0, 0),))]
    for _ in range(2, max_size + 1):
        nxt = set()
        for cells in level:
            occupied = set(cells)
            for x, y in cells:
                for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if nb not in occupied:
                        nxt.add(canonical_form(cells + (nb,)))
        level = nxt
        out.extend(LatticeAnimal(c) for c in sorted(level))
    return out


def _dedup(values, tol: float = DEDUP_TOL) -> np.ndarray:
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return v
    keep = [v[0]]
    for x in v[1:]:
        if x - keep[-1] > tol:
            keep.append(x)
    return np.array(keep)


@dataclass(frozen=True)
class DiscontinuityCatalog:
    """Adjacency eigenvalues of all animals of each size (``by_size``)."""

    by_size: dict
    minimal_polynomials: dict

    @property
    def max_size(self) -> int:
        return max(self.by_size) if self.by_size else 0

    def cumulative(self, size: int | None = None) -> np.ndarray:
        size = self.max_size if size is None else size
        vals = [self.by_size[s] for s in self.by_size if s <= size]
        return _dedup(np.concatenate(vals)) if vals else np.zeros(0)

    def contains(self, e: float, size: int | None = None, tol: float = DEDUP_TOL) -> bool:
        cat = self.cumulative(size)
        return bool(cat.size) and bool(np.min(np.abs(cat - e)) <= tol)


def _minimal_polynomials(animal: LatticeAnimal) -> list:
    import sympy

    lam = sympy.Symbol("lambda")
    m = sympy.Matrix(animal.adjacency().astype(int))
    _, factors = sympy.factor_list(m.charpoly(lam).as_expr(), lam)
    return sorted(str(f) for f, _ in factors)


def discontinuity_catalog(max_size: int) -> DiscontinuityCatalog:
    """Spectra of every lattice animal up to ``max_size`` cells.

    Exact irreducible factors of the characteristic polynomials are attached
    for sizes up to three.
    """
    animals = enumerate_lattice_animals(max_size)
    by_size: dict = {}
    polys: dict = {}
    for a in animals:
        ev = np.linalg.eigvalsh(a.adjacency()) if a.size > 1 else np.zeros(1)
        by_size.setdefault(a.size, []).append(ev)
        if a.size <= 3:
            polys.setdefault(a.size, set()).update(_minimal_polynomials(a))
    return DiscontinuityCatalog(
        {s: _dedup(np.concatenate(v)) for s, v in by_size.items()},
        {s: sorted(v) for s, v in polys.items()},
    )


# ---------------------------------------------------------------------------
# Monte Carlo IDS


def trial_seed(seed: int, trial: int) -> int:
    return (int(seed) ^ int(trial)) & SEED_MASK


def _trial(args):
    L, d, p, seed, t, grid, energies, tol, method = args
    cf = percolation_counting(sample_sites(L, d, p, trial_seed(seed, t)), method=method)
    jumps = [cf.cluster_count(e, tol) / float(cf.normalization) for e in energies]
    return t, cf.evaluate(grid), np.array(jumps), len(cf.eigenvalues) / float(cf.normalization)


@dataclass
class EmpiricalIDS:
    L: int
    d: int
    p: float
    trials: int
    seed: int
    grid: np.ndarray
    mean: np.ndarray
    energies: np.ndarray
    jump_mean: np.ndarray
    jump_std: np.ndarray
    active_fraction: np.ndarray

    @property
    def jump_stderr(self) -> np.ndarray:
        return self.jump_std / math.sqrt(self.trials)

    def jump(self, e: float):
        """``(mean, standard error)`` of the per-trial jump estimate at catalog energy ``e``."""
        k = int(np.argmin(np.abs(self.energies - e)))
        if abs(self.energies[k] - e) > DEDUP_TOL:
            raise KeyError(f"energy {e} not among the estimated energies")
        return float(self.jump_mean[k]), float(self.jump_stderr[k])


def empirical_ids(L: int, p: float, trials: int, seed: int, grid: Sequence[float],
                  energies: Sequence[float] = (), d: int = 2, tol: float = 1e-6,
                  jobs: int = 1, method: str = "lapack") -> EmpiricalIDS:
    """Average of ``N_omega^L`` over independent samples, with jump estimates.

    Trial ``t`` uses seed ``seed XOR t``. Jumps at each energy are estimated
    per trial by counting eigenvalues within ``tol``; results are aggregated
    in trial order regardless of ``jobs``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    grid = np.asarray(grid, dtype=float)
    energies = np.asarray(energies, dtype=float)
    tasks = [(L, d, p, seed, t, grid, energies, tol, method) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trial, tasks))
    else:
        results = [_trial(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    curves = np.array([r[1] for r in results])
    jumps = np.array([r[2] for r in results]).reshape(trials, energies.size)
    ddof = 1 if trials > 1 else 0
    return EmpiricalIDS(
        L, d, float(p), trials, int(seed), grid, curves.mean(axis=0), energies,
        jumps.mean(axis=0), jumps.std(axis=0, ddof=ddof), np.array([r[3] for r in results]),
    )


# ---------------------------------------------------------------------------
# atomless random potential


@dataclass
class PotentialSpectra:
    """Per-cluster spectra of adjacency plus i.i.d. uniform[0, 1] potential."""

    sample: PercolationSample
    spectra: list

    def counting(self) -> CountingFunction:
        ev = np.concatenate(self.spectra) if self.spectra else np.zeros(0)
        return CountingFunction(ev, Fraction(self.sample.L ** self.sample.d))

    def max_cluster_multiplicity(self, tol: float = 1e-9) -> int:
        """Largest number of eigenvalues of one cluster inside a window of width ``tol``."""
        best = 0
        for ev in self.spectra:
            ev = np.sort(ev)
            lo = 0
            for hi in range(ev.size):
                while ev[hi] - ev[lo] > tol:
                    lo += 1
                best = max(best, hi - lo + 1)
        return best

    def cross_cluster_coincidences(self, tol: float = 1e-9) -> int:
        """Pairs of eigenvalues from different clusters closer than ``tol``."""
        pairs = [(x, k) for k, ev in enumerate(self.spectra) for x in ev]
        pairs.sort()
        count = 0
        for i in range(len(pairs)):
            j = i + 1
            while j < len(pairs) and pairs[j][0] - pairs[i][0] <= tol:
                if pairs[j][1] != pairs[i][1]:
                    count += 1
                j += 1
        return count


def randomized_potential_spectra(sample: PercolationSample, seed: int,
                                 method: str = "lapack") -> PotentialSpectra:
    """Diagonalize each cluster's adjacency matrix plus a uniform[0, 1] potential.

    The potential is drawn for every box site (active or not) from the
    Philox stream keyed by ``seed``, so it does not depend on cluster order.
    """
    sub, new_to_old, comps = clusters(sample)
    eta = philox(seed).random(sample.L ** sample.d)
    spectra = []
    for comp in comps:
        a = _cluster_adjacency(sub, comp)
        a[np.diag_indices_from(a)] = eta[new_to_old[comp]]
        spectra.append(sym_eigenvalues(a, method=method).eigenvalues)
    return PotentialSpectra(sample, spectra)


def randomized_potential_counting(sample: PercolationSample, seed: int,
                                  method: str = "lapack") -> CountingFunction:
    return randomized_potential_spectra(sample, seed, method=method).counting()
