"""Dense solver, root finder, and eigenvalue wrapper tests."""
import numpy as np
import pytest

from gearstab.linalg import (
    ClusteredEigenvaluesError,
    SingularMatrixError,
    eigendecompose,
    eigenvalues,
    lu_solve,
    polynomial_roots,
    trim_polynomial,
)


def test_lu_solve_random_system():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((12, 12)) + 12 * np.eye(12)
    x_true = rng.standard_normal(12)
    x = lu_solve(A, A @ x_true)
    assert np.allclose(x, x_true, atol=1e-10)


def test_lu_solve_singular():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        lu_solve(A, np.ones(2))


def test_lu_solve_shape_checks():
    with pytest.raises(ValueError):
        lu_solve(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        lu_solve(np.eye(300), np.ones(300))


def test_trim_polynomial():
    c = trim_polynomial([1.0, 2.0, 1e-16, 0.0])
    assert c.size == 2


def test_roots_quadratic():
    # (z - 2)(z + 3) = z^2 + z - 6, ascending coefficients.
    roots = sorted(polynomial_roots([-6.0, 1.0, 1.0]), key=lambda z: z.real)
    assert abs(roots[0] + 3) < 1e-10
    assert abs(roots[1] - 2) < 1e-10


def test_roots_complex_circle():
    # z^8 - 1: eighth roots of unity.
    c = [0.0] * 9
    c[0], c[8] = -1.0, 1.0
    roots = polynomial_roots(c)
    assert len(roots) == 8
    assert max(abs(abs(r) - 1) for r in roots) < 1e-10
    angles = sorted(np.angle(roots))
    assert np.allclose(np.diff(angles), np.pi / 4, atol=1e-8)


def test_roots_double_root():
    # (z - 1)^2: cluster accuracy degrades to sqrt(tol) but both roots appear.
    roots = polynomial_roots([1.0, -2.0, 1.0])
    assert len(roots) == 2
    assert max(abs(r - 1) for r in roots) < 1e-4


def test_roots_degree_cap():
    with pytest.raises(ValueError):
        polynomial_roots([1.0] * 20)
    with pytest.raises(ValueError):
        polynomial_roots([5.0])


def test_eigenvalues_sorted_deterministic():
    A = np.array([[0.0, 1.0], [-2.0, -3.0]])
    lam = eigenvalues(A)
    assert abs(lam[0] + 2) < 1e-12 and abs(lam[1] + 1) < 1e-12
    assert eigenvalues(A) == lam


def test_eigendecompose_reconstructs():
    A = np.array([[-3.0, 1.0, 0.0], [0.0, -1.0, 2.0], [0.0, 0.0, -10.0]])
    T, lam = eigendecompose(A)
    assert np.allclose(A @ T, T @ np.diag(lam), atol=1e-10)


def test_eigendecompose_rejects_defective():
    # Jordan block: repeated eigenvalue, one eigenvector.
    A = np.array([[2.0, 1.0], [0.0, 2.0]])
    with pytest.raises(ClusteredEigenvaluesError):
        eigendecompose(A)
