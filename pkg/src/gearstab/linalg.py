"""Small dense linear algebra: LU solves, polynomial roots, eigenvalues.

LU factorization and eigenvalue extraction are delegated to LAPACK through
scipy/numpy behind the contracts below; the polynomial root finder is an
Aberth-Ehrlich simultaneous iteration with deterministic starting points,
which the stability module's root-condition test relies on.
"""
from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

MAX_LU_DIM = 256
MAX_EIG_DIM = 32
MAX_POLY_DEGREE = 16

_TRIM_TOL = 1e-14


class SingularMatrixError(Exception):
    pass


class RootConvergenceError(Exception):
    def __init__(self, message, best_iterate=None):
        super().__init__(message)
        self.best_iterate = best_iterate


class ClusteredEigenvaluesError(Exception):
    pass


def lu_solve(A, b):
    """Solve A x = b by LU with partial pivoting (square A, dimension <= 256)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if A.shape[0] > MAX_LU_DIM:
        raise ValueError(f"dimension {A.shape[0]} exceeds the {MAX_LU_DIM} cap")
    with warnings.catch_warnings():
        # Exact singularity is reported below as SingularMatrixError.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    norm_a = np.abs(A).sum(axis=1).max() if A.size else 0.0
    pivots = np.abs(np.diag(lu))
    if A.size and pivots.min() < 1e-13 * norm_a:
        raise SingularMatrixError(
            f"pivot {pivots.min():.3e} below 1e-13 * ||A||_inf = {1e-13 * norm_a:.3e}")
    return scipy.linalg.lu_solve((lu, piv), b)


def trim_polynomial(coeffs):
    """Drop leading coefficients with magnitude below 1e-14 (ascending input)."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("polynomial coefficients must be a non-empty 1-d sequence")
    n = c.size
    while n > 1 and abs(c[n - 1]) < _TRIM_TOL:
        n -= 1
    return c[:n]


def polynomial_roots(coeffs, *, tol=1e-12, max_iters=500):
    """All roots (with multiplicity) of a complex polynomial, ascending coefficients.

    Aberth-Ehrlich simultaneous iteration from deterministic starting points on
    a circle of the Cauchy-bound radius; converged when every residual
    |p(z)| / max|c| drops below ``tol``.
    """
    c = trim_polynomial(coeffs)
    n = c.size - 1
    if n < 1:
        raise ValueError("polynomial degree must be at least 1 after trimming")
    if n > MAX_POLY_DEGREE:
        raise ValueError(f"degree {n} exceeds the {MAX_POLY_DEGREE} cap")
    dc = c[1:] * np.arange(1, n + 1)
    scale = np.abs(c).max()

    cauchy = 1.0 + np.abs(c[:-1] / c[-1]).max()
    # Non-symmetric phase offset avoids stalling on symmetric root patterns.
    z = cauchy * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))

    desc = c[::-1]
    ddesc = dc[::-1]
    best = z.copy()
    best_res = np.inf
    for _ in range(max_iters):
        p = np.polyval(desc, z)
        res = np.abs(p).max() / scale
        if res < best_res:
            best_res = res
            best = z.copy()
        if res < tol:
            return list(z)
        dp = np.polyval(ddesc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
        w[~np.isfinite(w)] = 1e-12
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        denom[np.abs(denom) < 1e-300] = 1e-300
        z = z - w / denom
    # Multiple roots converge only linearly in the cluster; accept when the
    # residual is consistent with a multiplicity-limited cluster radius.
    if best_res < tol ** (1.0 / n) * 10:
        return list(best)
    raise RootConvergenceError(
        f"Aberth iteration did not converge in {max_iters} iterations "
        f"(best residual {best_res:.3e})", best_iterate=list(best))


def _check_square(A, cap):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] > cap:
        raise ValueError(f"dimension {A.shape[0]} exceeds the {cap} cap")
    return A


def eigenvalues(A):
    """All eigenvalues (with multiplicity) of a real square matrix, dim <= 32.

    Sorted by (real, imag) for deterministic output.
    """
    A = _check_square(A, MAX_EIG_DIM)
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise RootConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((lam.imag, lam.real))
    return list(lam[order])


def eigendecompose(A):
    """Eigenvector matrix T (unit columns) and eigenvalues of a diagonalizable A.

    Requires pairwise eigenvalue separation > 1e-8 * ||A||; clustered or
    defective spectra are rejected (the Jordan case is out of scope).
    """
    A = _check_square(A, MAX_EIG_DIM)
    try:
        lam, vecs = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise RootConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    norm_a = np.linalg.norm(A) if A.size else 0.0
    n = lam.size
    for i in range(n):
        for j in range(i + 1, n):
            if abs(lam[i] - lam[j]) <= 1e-8 * max(norm_a, 1e-300):
                raise ClusteredEigenvaluesError(
                    f"eigenvalues {lam[i]} and {lam[j]} are clustered; "
                    "matrix treated as non-diagonalizable")
    order = np.lexsort((lam.imag, lam.real))
    return vecs[:, order], list(lam[order])
