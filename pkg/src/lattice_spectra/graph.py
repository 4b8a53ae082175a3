"""Finite undirected graphs, vertex sets and lattice boundary collars."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .quadratic import QSqrt3


class VertexSet:
    """Immutable bitmask over the vertices ``0..n-1`` of a graph."""

    __slots__ = ("_mask",)

    def __init__(self, n: int, members: Iterable[int] = ()):
        mask = np.zeros(n, dtype=bool)
        idx = np.fromiter(members, dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= n:
                raise IndexError("vertex index out of range")
            mask[idx] = True
        mask.setflags(write=False)
        self._mask = mask

    @classmethod
    def from_mask(cls, mask) -> "VertexSet":
        vs = cls.__new__(cls)
        m = np.array(mask, dtype=bool, copy=True)
        m.setflags(write=False)
        vs._mask = m
        return vs

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls.from_mask(np.ones(n, dtype=bool))

    @property
    def n(self) -> int:
        return self._mask.size

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self._mask)

    def __iter__(self):
        return iter(int(i) for i in np.flatnonzero(self._mask))

    def __len__(self):
        return int(self._mask.sum())

    def __contains__(self, v) -> bool:
        return 0 <= v < self.n and bool(self._mask[v])

    def _check(self, other: "VertexSet"):
        if other.n != self.n:
            raise ValueError("vertex sets belong to graphs of different order")

    def __or__(self, other):
        self._check(other)
        return VertexSet.from_mask(self._mask | other._mask)

    def __and__(self, other):
        self._check(other)
        return VertexSet.from_mask(self._mask & other._mask)

    def __sub__(self, other):
        self._check(other)
        return VertexSet.from_mask(self._mask & ~other._mask)

    def complement(self) -> "VertexSet":
        return VertexSet.from_mask(~self._mask)

    def issubset(self, other: "VertexSet") -> bool:
        self._check(other)
        return not bool(np.any(self._mask & ~other._mask))

    def __eq__(self, other):
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self):
        return hash((self.n, self._mask.tobytes()))

    def __repr__(self):
        return f"VertexSet(n={self.n}, size={len(self)})"


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on dense vertex indices.

    ``coords`` holds exact planar positions (pairs of :class:`QSqrt3`),
    ``labels`` holds lattice labels such as integer coordinates or
    ``(cell1, cell2, offset)`` triples. ``lattice_degree`` is the vertex
    degree of the infinite regular lattice the graph was cut from; operators
    use it so that restrictions keep the full-lattice matrix elements.
    """

    adjacency: tuple
    coords: tuple | None = None
    labels: tuple | None = None
    lattice_degree: int | None = None
    _edge_cache: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.adjacency)
        for i, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"neighbor list of {i} is not sorted and unique")
            for j in nbrs:
                if not 0 <= j < n:
                    raise ValueError(f"neighbor {j} of {i} out of range")
                if j == i:
                    raise ValueError(f"self-loop at {i}")
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i not in self.adjacency[j]:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")
        if self.coords is not None and len(self.coords) != n:
            raise ValueError("coords length mismatch")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length mismatch")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], **kwargs) -> "Graph":
        nbrs = [set() for _ in range(n)]
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            nbrs[i].add(j)
            nbrs[j].add(i)
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(adj, **kwargs)

    @property
    def n(self) -> int:
        return len(self.adjacency)

    vertex_count = n

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for graph of order {self.n}")
        return len(self.adjacency[v])

    def full_degree(self, v: int) -> int:
        """Degree of ``v`` in the ambient lattice (falls back to the graph degree)."""
        if self.lattice_degree is not None:
            if not 0 <= v < self.n:
                raise IndexError(f"vertex {v} out of range for graph of order {self.n}")
            return self.lattice_degree
        return self.degree(v)

    def edges(self) -> list:
        """Edges as ``(i, j)`` with ``i < j`` in lexicographic order."""
        if self._edge_cache is None:
            es = [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]
            object.__setattr__(self, "_edge_cache", es)
        return list(self._edge_cache)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def is_full(self, v: int) -> bool:
        """True when ``v`` has its complete lattice neighborhood inside the graph."""
        return self.degree(v) == self.full_degree(v)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1.0
        return a

    def to_json(self) -> dict:
        out = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if self.coords is not None:
            out["coords"] = [[x.to_json(), y.to_json()] for x, y in self.coords]
        if self.labels is not None:
            out["labels"] = [list(lab) if isinstance(lab, tuple) else lab for lab in self.labels]
        if self.lattice_degree is not None:
            out["lattice_degree"] = self.lattice_degree
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        coords = None
        if "coords" in obj:
            coords = tuple((QSqrt3.from_json(x), QSqrt3.from_json(y)) for x, y in obj["coords"])
        labels = None
        if "labels" in obj:
            labels = tuple(tuple(lab) if isinstance(lab, list) else lab for lab in obj["labels"])
        return cls.from_edges(
            obj["n"], obj["edges"], coords=coords, labels=labels,
            lattice_degree=obj.get("lattice_degree"),
        )


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def connected_components(g: Graph) -> list:
    """Partition of the vertices into connected components.

    Components are returned as sorted index lists, ordered by their
    smallest vertex.
    """
    seen = np.zeros(g.n, dtype=bool)
    parts = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        parts.append(sorted(comp))
    return parts


def induced_subgraph(g: Graph, s: VertexSet):
    """Subgraph induced on ``s``.

    Returns
    -------
    sub : Graph
        Vertices re-indexed densely in increasing order of their old index.
    new_to_old : numpy.ndarray
        ``new_to_old[k]`` is the original index of new vertex ``k``.
    old_to_new : numpy.ndarray
        Inverse map; ``-1`` for vertices outside ``s``.
    """
    if s.n != g.n:
        raise ValueError("vertex set does not match graph order")
    new_to_old = s.indices()
    old_to_new = np.full(g.n, -1, dtype=np.int64)
    old_to_new[new_to_old] = np.arange(new_to_old.size)
    adj = []
    for old in new_to_old:
        adj.append(tuple(int(old_to_new[w]) for w in g.adjacency[old] if old_to_new[w] >= 0))
    coords = tuple(g.coords[i] for i in new_to_old) if g.coords is not None else None
    labels = tuple(g.labels[i] for i in new_to_old) if g.labels is not None else None
    sub = Graph(tuple(adj), coords=coords, labels=labels, lattice_degree=g.lattice_degree)
    return sub, new_to_old, old_to_new


def box_sites(L: int, d: int) -> list:
    """Integer points of the cornered box ``{0..L-1}^d`` in row-major order."""
    return list(itertools.product(range(L), repeat=d))


def distance_to_complement(site: Sequence[int], L: int) -> int:
    """Graph distance from a box site to the nearest lattice site outside the box."""
    return min(min(x + 1, L - x) for x in site)


def boundary_collar(L: int, d: int, depth: int):
    """Sites of the box within graph distance ``depth`` of its complement.

    Returns the collar as a :class:`VertexSet` indexed like :func:`box_sites`
    together with its cardinality.
    """
    if L < 1 or depth < 1:
        raise ValueError("need L >= 1 and depth >= 1")
    members = [k for k, site in enumerate(box_sites(L, d)) if distance_to_complement(site, L) <= depth]
    vs = VertexSet(L ** d, members)
    return vs, len(vs)
