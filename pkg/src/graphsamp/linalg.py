"""Shared dense and matrix-free linear algebra helpers."""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import SingularSystem, SolverDiverged


def pseudo_inverse(matrix: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """SVD pseudoinverse; singular values below rel_tol * sigma_max are zeroed."""
    u, s, vt = np.linalg.svd(np.asarray(matrix, dtype=float), full_matrices=False)
    cutoff = rel_tol * (s[0] if s.size else 0.0)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (vt.T * inv) @ u.T


def smallest_singular_value(matrix: np.ndarray) -> float:
    s = np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False)
    return float(s[-1]) if s.size else 0.0


def conjugate_gradient(
    operator: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    tol: float = 1e-10,
    max_iter: int | None = None,
    callback: Callable[[int, np.ndarray], None] | None = None,
) -> np.ndarray:
    """CG for a symmetric PSD matrix-free operator, from x0 = 0.

    Stops when ||op(x) - rhs|| <= tol * ||rhs||. Raises SolverDiverged after
    ``max_iter`` iterations (default 10 n), or SingularSystem when the
    residual has stalled inside the numerical kernel of the operator, which
    means the right-hand side is inconsistent.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.shape[0]
    if max_iter is None:
        max_iter = 10 * n
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return np.zeros(n)

    x = np.zeros(n)
    r = rhs.copy()
    p = r.copy()
    rs = float(r @ r)
    for iteration in range(1, max_iter + 1):
        ap = operator(p)
        denom = float(p @ ap)
        if denom <= 0.0:
            # Numerically semidefinite direction: the remaining residual lives
            # in the kernel, so the system has no consistent solution there.
            if np.linalg.norm(r) <= tol * rhs_norm:
                return x
            raise SingularSystem("search direction with nonpositive curvature; rhs has a kernel component")
        alpha = rs / denom
        x = x + alpha * p
        r = r - alpha * ap
        if callback is not None:
            callback(iteration, x)
        rs_next = float(r @ r)
        if np.sqrt(rs_next) <= tol * rhs_norm:
            return x
        p = r + (rs_next / rs) * p
        rs = rs_next
    # Out of budget: distinguish a singular stall from plain slow convergence.
    r_norm = float(np.linalg.norm(r))
    if r_norm > 0 and float(np.linalg.norm(operator(r))) <= 1e-10 * r_norm:
        raise SingularSystem("residual stalled in the numerical kernel of the operator")
    raise SolverDiverged(f"no convergence to {tol:g} within {max_iter} iterations "
                         f"(relative residual {r_norm / rhs_norm:.3e})")
