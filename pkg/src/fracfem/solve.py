"""SPD linear solve and two-sided condition number estimation."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import LoadVector, SymmetricMatrix

__all__ = ["DiscreteSolution", "solve_spd", "condition_estimate"]


@dataclass
class DiscreteSolution:
    mesh: object
    coefficients: np.ndarray  # over interior dofs; boundary values are zero


def _cholesky(A: SymmetricMatrix):
    try:
        return scipy.linalg.cho_factor(A.dense(), lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise ArithmeticError("matrix is not positive definite") from exc


def solve_spd(A: SymmetricMatrix, b: LoadVector, mesh=None):
    """Cholesky solve with a residual check at 1e-10 relative."""
    if A.dim != b.dim:
        raise ValueError(f"dimension mismatch: matrix {A.dim}, load {b.dim}")
    Ad = A.dense()
    # symmetric Jacobi scaling keeps the factorization well conditioned on
    # strongly graded meshes, where diagonal entries span many decades
    d = np.sqrt(np.diag(Ad))
    if np.any(d <= 0.0) or not np.all(np.isfinite(d)):
        raise ArithmeticError("matrix is not positive definite")
    As = Ad / np.outer(d, d)
    factor = _cholesky(SymmetricMatrix.from_dense(As))
    u = scipy.linalg.cho_solve(factor, b.values / d) / d
    nb = np.linalg.norm(b.values)
    if nb > 0.0:
        res = np.linalg.norm(Ad @ u - b.values) / nb
        # iterative refinement mops up the last digit when needed
        for _ in range(4):
            if res <= 1e-10:
                break
            u = u + scipy.linalg.cho_solve(factor, (b.values - Ad @ u) / d) / d
            res = np.linalg.norm(Ad @ u - b.values) / nb
        if res > 1e-10:
            raise ArithmeticError(f"solver residual {res:.3e} above 1e-10")
    return DiscreteSolution(mesh=mesh, coefficients=u)


def _power_iteration(matvec, n, tol, max_iter=20000):
    # deterministic start vector, mildly irregular to avoid symmetries
    v = np.cos(0.7 * np.arange(1, n + 1)) + 0.1
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = matvec(v)
        lam_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new
        lam = lam_new
    return lam


def condition_estimate(A: SymmetricMatrix, tol=1e-3):
    """kappa_2 = lambda_max / lambda_min by power iteration on A and A^{-1}."""
    n = A.dim
    if n == 1:
        return 1.0
    Ad = A.dense()
    factor = _cholesky(A)
    lam_max = _power_iteration(lambda v: Ad @ v, n, tol)
    inv_lam_min = _power_iteration(
        lambda v: scipy.linalg.cho_solve(factor, v), n, tol)
    return float(lam_max * inv_lam_min)
