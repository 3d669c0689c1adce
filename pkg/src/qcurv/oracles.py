"""Closed-form reference values used to check the numerical operators.

Nothing here shares code with the spectral machinery it is compared against.
"""

import numpy as np


def two_point_spectrum(c0, c1, p0, p1):
    """(mean, delta) of an observable in a superposition of two eigenstates."""
    w0, w1 = abs(c0) ** 2, abs(c1) ** 2
    tot = w0 + w1
    w0, w1 = w0 / tot, w1 / tot
    mean = w0 * p0 + w1 * p1
    return mean, float(np.sqrt(w0 * w1) * abs(p1 - p0))


def uniform_circle_coordinate(period=2.0 * np.pi):
    """Mean and dispersion of the sawtooth coordinate in the uniform state."""
    return period / 2.0, period / np.sqrt(12.0)


def radial_kinetic_sn(n, radius, f, df, d2f, rho, hbar=1.0):
    """-(hbar^2/2) Laplace-Beltrami on S^n of a function of the stereographic
    radius rho alone, via the polar angle theta with rho = 2R cot(theta/2):

        Lf = (f_thth + (n - 1) cot(theta) f_th) / R^2
    """
    rho = np.asarray(rho, dtype=float)
    theta = 2.0 * np.arctan2(2.0 * radius, rho)
    s = np.sin(0.5 * theta) ** 2
    r_th = -radius / s
    r_thth = radius * np.sin(theta) / (2.0 * s ** 2)
    f1, f2 = df(rho), d2f(rho)
    f_th = f1 * r_th
    f_thth = f2 * r_th ** 2 + f1 * r_thth
    lap = (f_thth + (n - 1) * np.cos(theta) / np.sin(theta) * f_th) / radius ** 2
    return -0.5 * hbar ** 2 * lap


def gaussian_profile(width):
    """f, f', f'' of exp(-rho^2 / 2 width^2)."""
    a = 1.0 / width ** 2

    def f(r):
        return np.exp(-0.5 * a * r ** 2)

    def df(r):
        return -a * r * f(r)

    def d2f(r):
        return (a ** 2 * r ** 2 - a) * f(r)

    return f, df, d2f


def sphere_harmonic_eigenvalue(l, radius=1.0, hbar=1.0):
    """Kinetic eigenvalue hbar^2 l (l + 1) / 2R^2 on the 2-sphere."""
    return 0.5 * hbar ** 2 * l * (l + 1) / radius ** 2


def alpha_saturating_density(alpha, radius=1.0):
    """|psi(pi)|^2 at which the alpha-chart boundary term vanishes."""
    return alpha / (2.0 * radius * np.sin(alpha * np.pi))


def torus_fourier_dispersion(chart, k, n_base=4096, hbar=1.0):
    """Momentum mean and dispersion of the plane wave k on a torus.

    The p_x eigenvalue 2 pi k hbar / A(y) varies across the base; the fibre
    probability of w^-1 e^{2 pi i k x / A} is proportional to A(y).
    """
    y = (np.arange(n_base) + 0.5) * chart.base_period / n_base
    A = chart.fibre_period(y)
    prob = A / A.sum()
    lam = 2.0 * np.pi * k * hbar / A
    mean = float(np.sum(prob * lam))
    return mean, float(np.sqrt(np.sum(prob * (lam - mean) ** 2)))
