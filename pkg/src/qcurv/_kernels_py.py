"""Pure-numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the compiled versions are tested against.
"""

import numpy as np


def trig_eval(coeffs, t):
    """Evaluate trigonometric polynomials at arbitrary points.

    ``coeffs`` has shape (B, 2M+1) holding c_{-M}..c_{M} for B independent
    rows; ``t`` has shape (P,). Returns the (B, P) array of
    sum_m c_m exp(i m t).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    t = np.asarray(t, dtype=float)
    M = (coeffs.shape[1] - 1) // 2
    m = np.arange(-M, M + 1)
    basis = np.exp(1j * np.outer(m, t))
    return coeffs @ basis


def bary_diffmat(x, w):
    """First-derivative matrix of the barycentric interpolant on nodes x.

    D[i, j] = (w_j / w_i) / (x_i - x_j) off the diagonal; the diagonal uses
    the negative-sum trick so constants differentiate to zero exactly.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D
