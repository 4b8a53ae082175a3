"""Spectral graph experiments on lattices, percolation clusters and quantum graphs."""

__version__ = "0.1.0"

from .graph import Graph, VertexSet, boundary_collar, connected_components, induced_subgraph
from .lattices import kagome_patch, tessellation_patch, zd_box
from .linalg import RationalMatrix, SymmetricMatrix, rational_kernel, rational_rank, sym_eigenvalues
from .operators import CountingFunction, OperatorSpec, build_operator, jump_at

__all__ = [
    "__version__",
    "Graph",
    "VertexSet",
    "boundary_collar",
    "connected_components",
    "induced_subgraph",
    "kagome_patch",
    "tessellation_patch",
    "zd_box",
    "RationalMatrix",
    "SymmetricMatrix",
    "rational_kernel",
    "rational_rank",
    "sym_eigenvalues",
    "CountingFunction",
    "OperatorSpec",
    "build_operator",
    "jump_at",
]
