"""Jacobi eigensolver and thin SVD against numpy.linalg oracles."""

import numpy as np
import pytest

from kprop.errors import NonFiniteError, NotSymmetricError, ShapeMismatchError
from kprop.numerics import eigh_symmetric, thin_svd


def random_symmetric(rng, n):
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2.0


def test_eigh_matches_numpy_on_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(1, 12))
        m = random_symmetric(rng, n)
        dec = eigh_symmetric(m)
        ref = np.sort(np.linalg.eigvalsh(m))[::-1]
        assert np.allclose(dec.eigenvalues, ref, atol=1e-10)


def test_eigh_reconstructs_the_matrix():
    rng = np.random.default_rng(12)
    for _ in range(10):
        m = random_symmetric(rng, int(rng.integers(2, 10)))
        dec = eigh_symmetric(m)
        v = dec.eigenvectors
        rebuilt = (v * dec.eigenvalues) @ v.T
        assert np.allclose(rebuilt, m, atol=1e-9)


def test_eigh_eigenvectors_orthonormal():
    rng = np.random.default_rng(13)
    m = random_symmetric(rng, 9)
    v = eigh_symmetric(m).eigenvectors
    assert np.allclose(v.T @ v, np.eye(9), atol=1e-10)


def test_eigh_descending_order():
    rng = np.random.default_rng(14)
    for _ in range(10):
        m = random_symmetric(rng, int(rng.integers(2, 8)))
        vals = eigh_symmetric(m).eigenvalues
        assert np.all(np.diff(vals) <= 1e-12)


def test_eigh_diagonal_and_degenerate():
    dec = eigh_symmetric(np.diag([3.0, -1.0, 3.0]))
    assert np.allclose(dec.eigenvalues, [3.0, 3.0, -1.0])
    # repeated eigenvalues still give an orthonormal basis
    v = dec.eigenvectors
    assert np.allclose(v.T @ v, np.eye(3), atol=1e-12)


def test_eigh_one_by_one_and_zero_matrix():
    assert eigh_symmetric(np.array([[5.0]])).eigenvalues[0] == 5.0
    dec = eigh_symmetric(np.zeros((4, 4)))
    assert np.allclose(dec.eigenvalues, 0.0)


def test_eigh_rejects_bad_input():
    with pytest.raises(NotSymmetricError):
        eigh_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ShapeMismatchError):
        eigh_symmetric(np.ones((2, 3)))
    with pytest.raises(NonFiniteError):
        eigh_symmetric(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_thin_svd_matches_numpy_singular_values():
    rng = np.random.default_rng(15)
    for _ in range(20):
        rows = int(rng.integers(1, 12))
        cols = int(rng.integers(1, 12))
        a = rng.normal(size=(rows, cols))
        u, s, v = thin_svd(a)
        ref = np.linalg.svd(a, compute_uv=False)
        assert np.allclose(s, ref, atol=1e-9)
        assert np.allclose(u @ np.diag(s) @ v.T, a, atol=1e-9)


def test_thin_svd_shapes_and_orthonormality():
    rng = np.random.default_rng(16)
    a = rng.normal(size=(7, 3))
    u, s, v = thin_svd(a)
    k = min(a.shape)
    assert u.shape == (7, k) and s.shape == (k,) and v.shape == (3, k)
    assert np.allclose(u.T @ u, np.eye(k), atol=1e-10)
    assert np.allclose(v.T @ v, np.eye(k), atol=1e-10)


def test_thin_svd_rank_deficient():
    # two identical columns: one singular value must be ~0
    a = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    u, s, v = thin_svd(a)
    assert s[1] < 1e-10
    assert np.allclose(u @ np.diag(s) @ v.T, a, atol=1e-10)
