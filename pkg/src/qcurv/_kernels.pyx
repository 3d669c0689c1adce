# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Same signatures and semantics; see that module for documentation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def trig_basis(Py_ssize_t M, t):
    """(2M+1, P) array of exp(i m t_p), m = -M..M, by rotation recurrence
    reseeded every 32 steps."""
    cdef double[::1] tt = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t P = tt.shape[0], K = 2 * M + 1, p, m
    basis = np.empty((K, P), dtype=np.complex128)
    cdef double[:, :, ::1] v = basis.view(np.float64).reshape(K, P, 2)
    cdef double zr, zi, re, im
    for p in range(P):
        v[M, p, 0] = 1.0
        v[M, p, 1] = 0.0
        zr = cos(tt[p])
        zi = sin(tt[p])
        re = 1.0
        im = 0.0
        for m in range(1, M + 1):
            if m % 32 == 0:
                re = cos(m * tt[p])
                im = sin(m * tt[p])
            else:
                re, im = re * zr - im * zi, re * zi + im * zr
            v[M + m, p, 0] = re
            v[M + m, p, 1] = im
            v[M - m, p, 0] = re
            v[M - m, p, 1] = -im
    return basis


def trig_eval(coeffs, t):
    c = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    return c @ trig_basis((c.shape[1] - 1) // 2, t)


def bary_diffmat(x, w):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xx = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t N = xx.shape[0], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=2] D = np.zeros((N, N), dtype=np.float64)
    cdef double s, v
    for i in range(N):
        s = 0.0
        for j in range(N):
            if i != j:
                v = (ww[j] / ww[i]) / (xx[i] - xx[j])
                D[i, j] = v
                s += v
        D[i, i] = -s
    return D
