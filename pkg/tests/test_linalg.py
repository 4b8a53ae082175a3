from fractions import Fraction

import numpy as np
import pytest

from lattice_spectra.linalg import (ConvergenceError, RationalMatrix, SymmetricMatrix, householder_tridiagonal,
                                    rational_kernel, rational_rank, spot_check, sym_eigenvalues,
                                    tridiagonal_ql)

from conftest import random_rational_matrix, svd_nullity


def _random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2


def test_two_by_two():
    s = sym_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(s.eigenvalues, [-1, 1])


def test_path_p3():
    a = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    assert np.allclose(sym_eigenvalues(a).eigenvalues, [-np.sqrt(2), 0, np.sqrt(2)], atol=1e-12)


def test_identity():
    assert np.allclose(sym_eigenvalues(np.eye(5)).eigenvalues, np.ones(5))


def test_one_by_one_and_errors():
    assert sym_eigenvalues(np.array([[3.0]])).eigenvalues.tolist() == [3.0]
    with pytest.raises(ValueError):
        sym_eigenvalues(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        sym_eigenvalues(np.eye(2), method="jacobi")


def test_trace_identity(rng):
    for _ in range(100):
        n = int(rng.integers(1, 101))
        a = _random_symmetric(rng, n)
        ev = sym_eigenvalues(a).eigenvalues
        assert np.all(np.diff(ev) >= 0)
        assert abs(ev.sum() - np.trace(a)) <= 1e-8 * n * max(1.0, np.abs(a).max())


def test_matches_lapack(rng):
    a = _random_symmetric(rng, 120)
    ours = sym_eigenvalues(a).eigenvalues
    assert np.allclose(ours, np.linalg.eigvalsh(a), atol=1e-10)


def test_interlacing(rng):
    for _ in range(50):
        n = int(rng.integers(2, 30))
        a = _random_symmetric(rng, n)
        keep = np.sort(rng.choice(n, size=int(rng.integers(1, n)), replace=False))
        b = a[np.ix_(keep, keep)]
        ea = sym_eigenvalues(a).eigenvalues
        eb = sym_eigenvalues(b).eigenvalues
        assert ea[0] <= eb[0] + 1e-10
        assert eb[-1] <= ea[-1] + 1e-10


def test_residual_spot_check(rng):
    a = _random_symmetric(rng, 40)
    s = sym_eigenvalues(a)
    assert spot_check(a, s, samples=6) <= s.residual_bound


def test_degenerate_spectrum():
    a = np.kron(np.eye(4), np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(sym_eigenvalues(a).eigenvalues, [1] * 4 + [3] * 4)


def test_convergence_error_reports_index(rng):
    d, e = householder_tridiagonal(_random_symmetric(rng, 10))
    with pytest.raises(ConvergenceError) as info:
        tridiagonal_ql(d, e, max_sweeps=0)
    assert info.value.index == 0


def test_packed_storage():
    a = np.array([[1.0, 2.0], [2.0, 5.0]])
    s = SymmetricMatrix.from_dense(a)
    assert np.array_equal(s.to_dense(), a)
    with pytest.raises(ValueError):
        SymmetricMatrix.from_rational(RationalMatrix.from_dense([[1, 2], [3, 4]]))


def test_rank_examples():
    assert rational_rank(RationalMatrix.from_dense([[1, 2], [2, 4]])) == 1
    dim, basis = rational_kernel(RationalMatrix.from_dense([[0] * 3] * 3))
    assert dim == 3 and len(basis) == 3
    assert rational_kernel(RationalMatrix.from_dense([[1, 0, 0], [0, 2, 0], [0, 0, 3]]))[0] == 0


@pytest.mark.parametrize("method", ["sparse", "bareiss"])
def test_kernel_exact_and_matches_svd(rng, method):
    for _ in range(40):
        rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        dense = random_rational_matrix(rng, rows, cols)
        if rng.random() < 0.5 and rows > 1:
            dense[-1] = [x + y for x, y in zip(dense[0], dense[1 % rows])]
        m = RationalMatrix.from_dense(dense)
        dim, basis = rational_kernel(m, method=method)
        assert dim == svd_nullity(m.to_float())
        for v in basis:
            assert all(x == 0 for x in m.matvec(v))


def test_random_ten_by_ten_rank(rng):
    dense = random_rational_matrix(rng, 10, 10)
    m = RationalMatrix.from_dense(dense)
    assert rational_rank(m) == 10 - svd_nullity(m.to_float())
    assert rational_rank(m, "sparse") == rational_rank(m, "bareiss")


def test_methods_agree_on_structured(rng):
    # rank deficient by construction: product of thin factors
    a = rng.integers(-3, 4, size=(12, 4))
    b = rng.integers(-3, 4, size=(4, 12))
    m = RationalMatrix.from_dense((a @ b).tolist())
    assert rational_rank(m, "sparse") == rational_rank(m, "bareiss") == np.linalg.matrix_rank(a @ b)


def test_rational_matrix_ops():
    m = RationalMatrix.from_dense([[1, Fraction(1, 2)], [Fraction(1, 2), 3]])
    assert m.is_symmetric()
    assert m.shifted(1)[0, 0] == 0
    assert m.transpose() == m
    assert m.scaled(2)[0, 1] == 1
    assert m.submatrix([1], [0, 1]).to_dense() == [[Fraction(1, 2), 3]]
    assert RationalMatrix.vstack([m, RationalMatrix.identity(2)]).rows == 4
