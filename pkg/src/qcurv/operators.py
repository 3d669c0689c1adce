"""Momentum, coordinate and kinetic-energy operators acting on grid states.

Momenta are the symmetric operators ``(hbar/i) * scale / w * d/dt (w .)``
of each chart; coordinate operators are multiplications. Nothing here
renormalizes its output.
"""

from dataclasses import dataclass

import numpy as np
from scipy.fft import fft, fftfreq, ifft

from .geometry import AlphaChart, CurveChart, SphereChart, TorusChart, WrappedChart
from .state import (BoxGrid, Grid1D, Grid2D, SphereGrid, WaveFunction, inner, seam_fields,
                    seam_rule, seam_value)


class UnsupportedOperatorError(ValueError):
    pass


@dataclass(frozen=True)
class PlanckConstant:
    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError(f"hbar must be positive, got {self.value}")

    def __float__(self):
        return float(self.value)


def _hbar(h):
    return float(PlanckConstant(float(h)))


@dataclass(frozen=True, eq=False)
class MomentumOperator:
    """Symmetric momentum conjugate to a closed chart coordinate."""

    grid: object
    axis: int = 0
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hbar", _hbar(self.hbar))
        chart = self.grid.chart
        if isinstance(chart, SphereChart):
            raise UnsupportedOperatorError(
                "spherical-angle momenta are not self-adjoint (boundary terms at the "
                "poles); use stereo_momentum for the stereographic momenta")
        if isinstance(self.grid, Grid1D):
            if self.axis != 0:
                raise UnsupportedOperatorError("one-dimensional charts have a single axis")
        elif isinstance(self.grid, Grid2D):
            if self.axis == 1 and not isinstance(chart, WrappedChart):
                raise UnsupportedOperatorError(
                    "the torus base coordinate y has no closed-line momentum here; use axis 0")
            if self.axis not in (0, 1):
                raise UnsupportedOperatorError(f"bad axis {self.axis}")
        else:
            raise UnsupportedOperatorError(f"no closed-coordinate momentum on {chart.chart_id}")

    def apply(self, psi):
        return apply_momentum(self, psi)

    __call__ = apply


def apply_momentum(op, psi):
    if psi.grid is not op.grid:
        raise ValueError("state and operator live on different grids")
    grid = op.grid
    chart = grid.chart
    w = grid.weight
    if isinstance(grid, Grid1D):
        t = grid.nodes
        s = chart.scale(t)
        if psi.weighted or chart.weight_periodic:
            out = s / w * grid.derivative(w * psi.samples)
        else:
            # w is not periodic (alpha chart): product rule with the exact w'
            out = s * (grid.derivative(psi.samples) + chart.weight_deriv(t) / w * psi.samples)
    else:
        out = grid.derivative(w * psi.samples, axis=op.axis) / w
    return WaveFunction(grid, -1j * op.hbar * out, psi.weighted and not isinstance(chart, AlphaChart))


def coordinate_values(grid, axis=0):
    """Values of the coordinate operator at the grid nodes."""
    chart = grid.chart
    if isinstance(grid, Grid1D):
        return chart.coordinate(grid.nodes)
    if isinstance(grid, Grid2D):
        if isinstance(chart, TorusChart) and axis != 0:
            raise UnsupportedOperatorError("only the fibre coordinate x is supported on the torus")
        return grid.nodes[axis]
    if isinstance(grid, SphereGrid):
        q = chart.stereo_coords(*grid.nodes)
        return q[axis]
    if isinstance(grid, BoxGrid):
        return grid.nodes[axis]
    raise TypeError(f"unsupported grid {grid!r}")


def apply_coordinate(grid, axis, psi):
    """Multiply psi by the chart coordinate (sawtooth on closed lines)."""
    return WaveFunction(grid, coordinate_values(grid, axis) * psi.samples, psi.weighted)


# ---------------------------------------------------------------------------
# periodic-coordinate commutator


def _require_curve(psi):
    if not isinstance(psi.chart, CurveChart):
        raise UnsupportedOperatorError("the delta-comb commutator is defined for curve charts")


def commutator_matrix_element(psi1, psi2, hbar=1.0):
    """<psi1|[x~, p] psi2> with the delta comb at the seam taken analytically.

    Equals i hbar (<psi1|psi2> - A h(0) psi1*(0) psi2(0)).
    """
    _require_curve(psi1)
    _require_curve(psi2)
    hbar = _hbar(hbar)
    c1 = seam_value(psi1, "chi")
    c2 = seam_value(psi2, "chi")
    return 1j * hbar * (inner(psi1, psi2) - psi1.chart.period * np.conj(c1) * c2)


def sawtooth_commutator(psi1, psi2, hbar=1.0):
    """<x psi1|p psi2> - <p psi1|x psi2> by seam quadrature.

    Independent of :func:`commutator_matrix_element`: no boundary formula,
    both operator applications evaluated on the Gauss-Legendre seam rule.
    """
    hbar = _hbar(hbar)
    rule = seam_rule(psi1.grid)
    f1, f2 = seam_fields(psi1, rule), seam_fields(psi2, rule)
    p1 = -1j * hbar * rule.scale / rule.weight * f1.dchi
    p2 = -1j * hbar * rule.scale / rule.weight * f2.dchi
    X = rule.coordinate
    return complex(np.sum(rule.weights * X * (np.conj(f1.psi) * p2 - np.conj(p1) * f2.psi)))


# ---------------------------------------------------------------------------
# sphere: stereographic momenta and kinetic energy


def _phi_modes(n):
    m = fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        m[n // 2] = 0.0
    return m


def phi_derivative(grid, f, order=1):
    m = _phi_modes(grid.n_phi)
    return ifft((1j * m) ** order * fft(f, axis=1), axis=1)


def theta_derivative(grid, f):
    """d/dtheta on the Gauss-Legendre nodes, exact for band-limited functions.

    Each azimuthal mode m of a smooth function on the sphere is
    sin(theta)^(m mod 2) times a polynomial in cos(theta); the polynomial
    part is differentiated barycentrically.
    """
    x = grid.cos_theta
    s = np.sqrt(1.0 - x ** 2)[:, None]
    D = grid.diffmat
    m = _phi_modes(grid.n_phi)
    F = fft(np.asarray(f, dtype=complex), axis=1)
    odd = (np.abs(m).astype(int) % 2 == 1)
    out = np.empty_like(F)
    out[:, ~odd] = -s * (D @ F[:, ~odd])
    u = F[:, odd] / s
    out[:, odd] = x[:, None] * u - s ** 2 * (D @ u)
    return ifft(out, axis=1)


def stereo_momentum(i, psi, hbar=1.0):
    """p_1 or p_2 of the stereographic chart (i in {1, 2}), acting on psi
    given on a :class:`SphereGrid`:

    p_1 = (i hbar / R) (sin(phi)/sin(theta) d_phi + cos(phi) d_theta) sin^2(theta/2)
    p_2 = (i hbar / R) (-cos(phi)/sin(theta) d_phi + sin(phi) d_theta) sin^2(theta/2)
    """
    grid = psi.grid
    if not isinstance(grid, SphereGrid):
        raise UnsupportedOperatorError("stereographic momenta act on sphere grids")
    hbar = _hbar(hbar)
    theta, phi = grid.nodes
    R = grid.chart.radius
    f = np.sin(0.5 * theta) ** 2 * psi.samples
    dphi = phi_derivative(grid, f)
    dth = theta_derivative(grid, f)
    if i == 1:
        v = np.sin(phi) / np.sin(theta) * dphi + np.cos(phi) * dth
    elif i == 2:
        v = -np.cos(phi) / np.sin(theta) * dphi + np.sin(phi) * dth
    else:
        raise ValueError("stereographic momentum index must be 1 or 2")
    return WaveFunction(grid, 1j * hbar / R * v)


apply_stereo_momentum = stereo_momentum


def kinetic_lb(psi, hbar=1.0):
    """-(hbar^2/2) Laplace-Beltrami on the sphere, in spherical angles."""
    grid = psi.grid
    if not isinstance(grid, SphereGrid):
        raise UnsupportedOperatorError("kinetic_lb acts on sphere grids")
    hbar = _hbar(hbar)
    theta, _ = grid.nodes
    R = grid.chart.radius
    st = np.sin(theta)
    radial = theta_derivative(grid, st * theta_derivative(grid, psi.samples)) / st
    azim = phi_derivative(grid, psi.samples, order=2) / st ** 2
    return WaveFunction(grid, -0.5 * hbar ** 2 / R ** 2 * (radial + azim))


def _box_momentum(grid, f, i, hbar):
    """(hbar/i) S^(-n/2) d_i S^(n/2) f on a stereographic box grid."""
    chart = grid.chart
    q = grid.nodes
    S = chart.conformal_factor(q)
    dlog = -0.5 * chart.n * q[i] / (2.0 * chart.radius ** 2) * S
    return -1j * hbar * (grid.derivative(f, axis=i) + dlog * f)


def box_momentum(i, psi, hbar=1.0):
    """Stereographic momentum p_i (i = 1..n) on S^n, box-grid representation."""
    grid = psi.grid
    if not isinstance(grid, BoxGrid):
        raise UnsupportedOperatorError("box_momentum acts on stereographic box grids")
    if not 1 <= i <= grid.chart.n:
        raise ValueError(f"momentum index {i} outside 1..{grid.chart.n}")
    return WaveFunction(grid, _box_momentum(grid, psi.samples, i - 1, _hbar(hbar)))


def kinetic_factorized(psi, hbar=1.0, inner_exponent=None):
    """Kinetic energy composed as  F^(n/2) . (1/2) sum_i p_i F^e p_i . F^(n/2)
    with F = 1 + |q|^2/4R^2, applied right to left.

    ``inner_exponent`` defaults to 2 - n, for which the chain equals
    -(hbar^2/2) Laplace-Beltrami on S^n. Pass ``"4-2n"`` to use 4 - 2n
    instead; the two agree only for n = 2.
    """
    hbar = _hbar(hbar)
    grid = psi.grid
    if isinstance(grid, SphereGrid):
        n = 2
    elif isinstance(grid, BoxGrid):
        n = grid.chart.n
    else:
        raise UnsupportedOperatorError("kinetic_factorized needs a stereographic chart")
    if inner_exponent is None:
        e = 2 - n
    elif inner_exponent == "4-2n":
        e = 4 - 2 * n
    else:
        e = float(inner_exponent)

    if isinstance(grid, SphereGrid):
        theta, _ = grid.nodes
        F = 1.0 / np.sin(0.5 * theta) ** 2
        g = WaveFunction(grid, F * psi.samples)
        total = 0.0
        for i in (1, 2):
            h = stereo_momentum(i, g, hbar)
            h = WaveFunction(grid, F ** e * h.samples)
            total = total + stereo_momentum(i, h, hbar).samples
        return WaveFunction(grid, 0.5 * F * total)

    chart = grid.chart
    F = 1.0 / chart.conformal_factor(grid.nodes)
    g = F ** (0.5 * n) * psi.samples
    total = 0.0
    for i in range(n):
        h = F ** e * _box_momentum(grid, g, i, hbar)
        total = total + _box_momentum(grid, h, i, hbar)
    return WaveFunction(grid, 0.5 * F ** (0.5 * n) * total)
