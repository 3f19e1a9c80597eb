"""Symmetric eigenvalues by cyclic Jacobi rotations."""

from __future__ import annotations

import numpy as np

OFF_DIAGONAL_TOL = 1e-10


def jacobi_eigenvalues(a, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, ascending.

    Sweeps over all (p, q) pairs, zeroing each off-diagonal entry with a
    rotation, until the off-diagonal Frobenius norm drops below ``tol``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T):
        raise ValueError("matrix must be square and symmetric")
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(a))
