"""Lovász theta as the least largest eigenvalue of a matrix family.

For a graph on ``n`` vertices consider symmetric matrices with ones on the
diagonal and on every non-adjacent pair; the entries on edges are free.
Theta is the minimum of the largest eigenvalue over that family.

``lambda_max`` is nonsmooth exactly where it matters (at the optimum the top
eigenvalue is usually repeated), so instead of raw subgradient steps we
minimise the soft maximum ``mu * log(sum(exp(lambda_i / mu)))``, which is
smooth, within ``mu * log(n)`` of ``lambda_max``, and has gradient
``sum_i w_i v_i v_i^T``.  L-BFGS is run for a decreasing schedule of ``mu``,
warm-starting each stage.  The reported value is ``lambda_max`` of an actual
member of the family, so it never undershoots theta by more than rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from graphbrain.graphs import Graph

THETA_TOL = 1e-3
MU_SCHEDULE = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class ThetaResult:
    value: float
    converged: bool
    gap: float  # bound on lambda_max minus the smoothed optimum of the last stage
    grad_norm: float


def _matrix(n, rows, cols, x):
    m = np.ones((n, n))
    m[rows, cols] = x
    m[cols, rows] = x
    return m


def lovasz_theta(g: Graph, max_iter: int = 5000) -> ThetaResult:
    n = g.n
    edges = g.edges()
    if not edges:
        # the all-ones matrix is the only member
        return ThetaResult(float(n), True, 0.0, 0.0)
    rows = np.array([u for u, _ in edges])
    cols = np.array([v for _, v in edges])
    x = np.zeros(len(edges))

    def smoothed(x, mu):
        lam, vec = np.linalg.eigh(_matrix(n, rows, cols, x))
        top = lam[-1]
        w = np.exp((lam - top) / mu)
        total = w.sum()
        w /= total
        f = top + mu * np.log(total)
        grad = 2.0 * np.einsum("k,ik,ik->i", w, vec[rows], vec[cols])
        return f, grad

    budget = max_iter
    grad = np.zeros_like(x)
    for mu in MU_SCHEDULE:
        if budget <= 0:
            break
        res = minimize(
            smoothed, x, args=(mu,), jac=True, method="L-BFGS-B",
            options={"maxiter": budget, "gtol": 1e-10, "ftol": 1e-15},
        )
        budget -= res.nit
        x = res.x
        grad = res.jac
    top = float(np.linalg.eigvalsh(_matrix(n, rows, cols, x))[-1])
    gap = MU_SCHEDULE[-1] * np.log(n)
    grad_norm = float(np.linalg.norm(grad))
    return ThetaResult(top, bool(grad_norm < 1e-3 and budget > 0), float(gap), grad_norm)
