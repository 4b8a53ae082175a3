import random
from fractions import Fraction

import numpy as np
import pytest


class UnionFind:
    """Reference connectivity oracle, independent of the BFS in the library."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self):
        out = {}
        for v in range(len(self.parent)):
            out.setdefault(self.find(v), []).append(v)
        return sorted(out.values())


def svd_nullity(a, threshold=1e-8):
    """Float nullspace dimension from singular values (oracle for exact kernels)."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return a.shape[1] if a.ndim == 2 else 0
    s = np.linalg.svd(a, compute_uv=False)
    scale = max(1.0, float(s.max()) if s.size else 1.0)
    return a.shape[1] - int(np.sum(s > threshold * scale))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def prng():
    return random.Random(2024)


def random_rational_matrix(rng, rows, cols, span=5, den=3):
    return [[Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))
             for _ in range(cols)] for _ in range(rows)]


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
