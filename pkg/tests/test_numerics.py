import mpmath
import numpy as np
import pytest

from ratgabor import numerics
from ratgabor.errors import NotHermitian
from ratgabor.numerics import TausskyMode


def charpoly_eigenvalues(H):
    """Eigenvalues of a Hermitian matrix from its characteristic polynomial.

    Faddeev-LeVerrier in 50-digit arithmetic, then polynomial roots.
    """
    mpmath.mp.dps = 50
    n = H.shape[0]
    A = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in H])
    coeffs = [mpmath.mpf(1)]
    M = mpmath.zeros(n, n)
    for k in range(1, n + 1):
        M = A * M + coeffs[-1] * mpmath.eye(n)
        AM = A * M
        coeffs.append(-sum(AM[i, i] for i in range(n)) / k)
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    mpmath.mp.dps = 15
    return sorted(float(mpmath.re(r)) for r in roots)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_simple_singular_values(method):
    np.testing.assert_allclose(numerics.singular_values(np.eye(3), method), [1, 1, 1])
    np.testing.assert_allclose(numerics.singular_values(np.diag([3, 2, 1]) + 0j, method),
                               [3, 2, 1])


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_singular_values_against_charpoly(rng, method):
    for _ in range(10):
        M = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        oracle = np.sqrt(np.maximum(charpoly_eigenvalues(M @ M.conj().T), 0))[::-1]
        np.testing.assert_allclose(numerics.singular_values(M, method), oracle, atol=1e-9)


def test_jacobi_matches_lapack(rng):
    for shape in [(1, 1), (1, 5), (5, 1), (3, 5), (6, 4), (7, 7)]:
        M = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        a = numerics.singular_values(M, "lapack")
        b = numerics.singular_values(M, "jacobi")
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12 * a[0])


def test_rank_examples(rng):
    assert numerics.rank_with_tol(np.zeros((2, 3)), 1e-8).rank == 0
    assert numerics.rank_with_tol(np.eye(3), 1e-8).rank == 3
    u = rng.normal(size=5) + 1j * rng.normal(size=5)
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    report = numerics.rank_with_tol(np.outer(u, v.conj()), 1e-8)
    assert report.rank == 1
    assert list(report.singular_values) == sorted(report.singular_values, reverse=True)
    assert report.threshold_used == pytest.approx(1e-8 * report.singular_values[0])


def test_rank_permutation_invariant(rng):
    for _ in range(20):
        M = rng.normal(size=(4, 6)) + 1j * rng.normal(size=(4, 6))
        M[3] = M[0] + 2 * M[1]
        r = numerics.rank_with_tol(M).rank
        assert r == 3
        assert numerics.rank_with_tol(M[rng.permutation(4)][:, rng.permutation(6)]).rank == r


def test_unitary_diagonal_invariance(rng):
    for _ in range(20):
        M = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        D1 = np.diag(np.exp(2j * np.pi * rng.uniform(size=3)))
        D2 = np.diag(np.exp(2j * np.pi * rng.uniform(size=5)))
        np.testing.assert_allclose(numerics.singular_values(D1 @ M @ D2),
                                   numerics.singular_values(M), atol=1e-10)


def test_svd_eig_consistency(rng):
    for _ in range(50):
        M = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        smin = numerics.singular_values(M)[-1]
        lam = numerics.min_eig_hermitian(M @ M.conj().T)
        assert smin**2 == pytest.approx(lam, rel=1e-8)


def test_min_eig_examples():
    assert numerics.min_eig_hermitian(np.eye(3)) == pytest.approx(1)
    assert numerics.min_eig_hermitian(np.diag([5, 0.25])) == pytest.approx(0.25)
    with pytest.raises(NotHermitian):
        numerics.min_eig_hermitian(np.array([[1, 2], [0, 1]]))


def test_min_eig_batched():
    batch = np.stack([np.eye(2), np.diag([3.0, 0.5])])
    np.testing.assert_allclose(numerics.min_eig_hermitian(batch), [1, 0.5])


def test_taussky_examples():
    r = numerics.taussky_check(np.array([[3, 1], [1, 3]]), TausskyMode.ROW_DOMINANCE)
    assert r.passed and r.margin == pytest.approx(2)
    r = numerics.taussky_check(np.array([[1, 2], [2, 1]]), TausskyMode.ROW_DOMINANCE)
    assert not r.passed and r.margin == pytest.approx(-1)
    assert numerics.determinant(np.array([[1, 2], [2, 1]])) == pytest.approx(-3)
    r = numerics.taussky_check(np.array([[2, 1], [1, 2]]), TausskyMode.PAIRWISE_PRODUCT)
    assert r.passed and r.margin == pytest.approx(3)


def test_pairwise_weaker_than_rows():
    # row 0 is not dominant, but the pairwise products are
    M = np.array([[1.0, 1.5, 0], [0, 4, 0.1], [0, 0.1, 4]])
    assert not numerics.taussky_check(M, TausskyMode.ROW_DOMINANCE).passed
    assert numerics.taussky_check(M, TausskyMode.PAIRWISE_PRODUCT).passed


def test_determinant_examples():
    assert numerics.determinant(np.eye(4)) == pytest.approx(1)
    assert numerics.determinant(np.array([[0, 1], [1, 0]])) == pytest.approx(-1)


def test_taussky_soundness_small(rng):
    for _ in range(2000):
        n = int(rng.integers(2, 7))
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        M += np.diag(rng.uniform(0, 6, n) * np.exp(2j * np.pi * rng.uniform(size=n)))
        for mode in TausskyMode:
            if numerics.taussky_check(M, mode).passed:
                assert abs(numerics.determinant(M)) > 0
