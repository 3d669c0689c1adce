"""Spectral building blocks on half-offset periodic grids.

Every periodic axis in the package samples ``N`` points at
``start + (j + 1/2) * period / N``; the coordinate seam ``start`` is never a
node. The Nyquist mode is discarded everywhere so that differentiation is
exactly skew-adjoint and interpolation is real-valued for real data.
"""

from functools import lru_cache

import numpy as np
from scipy.fft import fft, ifft, fftfreq

from . import kernels


def periodic_nodes(n, period, start=0.0):
    return start + (np.arange(n) + 0.5) * (period / n)


def _to_rows(a, axis):
    a = np.moveaxis(np.asarray(a), axis, -1)
    return a.reshape(-1, a.shape[-1]), a.shape


def fourier_coeffs(samples, axis=-1):
    """Centered coefficients c_{-M}..c_{M} (M = N/2 - 1) along ``axis``.

    The coefficients refer to the unit-period variable s = (t - start)/period
    so that f(t) = sum_m c_m exp(2 pi i m s). Result has the sampled axis
    replaced by the coefficient axis, moved to the end.
    """
    rows, shape = _to_rows(samples, axis)
    n = rows.shape[-1]
    F = fft(rows, axis=-1) / n
    m = fftfreq(n, 1.0 / n)
    F = F * np.exp(-1j * np.pi * m / n)
    M = n // 2 - 1
    c = np.concatenate([F[:, n - M:], F[:, : M + 1]], axis=-1)
    return c.reshape(shape[:-1] + (2 * M + 1,))


def interpolate(samples, points, period, start=0.0, axis=-1):
    """Trigonometric interpolant of periodic samples evaluated off-grid.

    ``points`` is 1-D; output has the sampled axis replaced by the points,
    moved to the end.
    """
    c = fourier_coeffs(samples, axis=axis)
    lead = c.shape[:-1]
    s = 2.0 * np.pi * (np.asarray(points, dtype=float) - start) / period
    out = kernels.trig_eval(c.reshape(-1, c.shape[-1]), np.atleast_1d(s))
    return out.reshape(lead + (np.size(s),))


def derivative(samples, period, axis=-1, order=1):
    """Spectral derivative along ``axis`` for a uniform periodic axis.

    ``period`` may be an array broadcastable against the other axes (used
    when the fibre length varies across the base, as on the torus).
    """
    a = np.moveaxis(np.asarray(samples, dtype=complex), axis, -1)
    n = a.shape[-1]
    m = fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        m[n // 2] = 0.0
    period = np.asarray(period, dtype=float)
    if period.ndim:
        period = period[..., None]
    k = 2.0 * np.pi * m / period
    out = ifft((1j * k) ** order * fft(a, axis=-1), axis=-1)
    return np.moveaxis(out, -1, axis)


@lru_cache(maxsize=64)
def gauss_legendre(n, a=-1.0, b=1.0):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    x, w = a + half * (x + 1.0), half * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre_bary_weights(x, w):
    """Barycentric weights for Gauss-Legendre nodes x with quadrature weights w.

    Uses the closed form (-1)^j sqrt((1 - x_j^2) w_j), nodes ascending.
    """
    order = np.argsort(x)
    bw = np.sqrt((1.0 - x ** 2) * w)
    sign = np.empty_like(bw)
    sign[order] = (-1.0) ** np.arange(len(x))
    return sign * bw


def legendre_diffmat(n):
    """Nodes, quadrature weights and differentiation matrix on [-1, 1]."""
    x, w = gauss_legendre(n)
    return x, w, kernels.bary_diffmat(x, legendre_bary_weights(x, w))
