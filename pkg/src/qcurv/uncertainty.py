"""Dispersions, the cross term Im<x psi|p psi>, its closed forms, and reports."""

import csv
import io
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import AlphaChart, CurveChart, SphereChart, StereoChartN, TorusChart, WrappedChart
from . import spectral
from .operators import (MomentumOperator, _hbar, apply_momentum,
                        box_momentum, coordinate_values, stereo_momentum)
from .state import (BoxGrid, Grid1D, Grid2D, SphereGrid, WaveFunction, inner, seam_fields,
                    seam_rule, seam_value)

NORMALIZATION_TOL = 1e-8
INEQUALITY_SLACK = 1e-8


def _require_normalized(psi):
    nrm = inner(psi, psi).real
    if abs(nrm - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"state is not normalized (<psi|psi> = {nrm:.12g})")
    return nrm


def dispersion(action, psi):
    """(mean, delta) of an observable given as ``action(psi) -> WaveFunction``.

    Uses the grid scalar product; right for observables whose action keeps
    the integrand periodic and smooth (momenta). Coordinates on closed
    lines go through :func:`coordinate_dispersion`.
    """
    _require_normalized(psi)
    a = action(psi)
    mean = inner(psi, a).real
    # centred form avoids cancellation for near-eigenstates
    d = WaveFunction(psi.grid, a.samples - mean * psi.samples, psi.weighted)
    return mean, _sqrt_var(inner(d, d).real)


def _sqrt_var(var):
    if var < -1e-12:
        raise ArithmeticError(f"negative variance {var:.3e}")
    return float(np.sqrt(max(var, 0.0)))


def _is_seam_grid(grid):
    return isinstance(grid, (Grid1D, Grid2D))


def _seam_data(grid, axis, psi, hbar):
    rule = seam_rule(grid, axis)
    f = seam_fields(psi, rule)
    p = -1j * hbar * rule.scale / rule.weight * f.dchi
    return rule, f, p


def coordinate_dispersion(grid, axis, psi):
    _require_normalized(psi)
    if _is_seam_grid(grid):
        rule = seam_rule(grid, axis)
        f = seam_fields(psi, rule)
        dens = rule.weights * np.abs(f.psi) ** 2
        X = rule.coordinate
        with np.errstate(invalid="ignore", over="ignore"):
            mean = float(np.sum(dens * X))
            var = float(np.sum(dens * (X - mean) ** 2))
        return mean, _sqrt_var(var)
    X = coordinate_values(grid, axis)
    return dispersion(lambda s: WaveFunction(grid, X * s.samples), psi)


def _momentum_action(grid, axis, hbar):
    if isinstance(grid, SphereGrid):
        return lambda s: stereo_momentum(axis + 1, s, hbar)
    if isinstance(grid, BoxGrid):
        return lambda s: box_momentum(axis + 1, s, hbar)
    op = MomentumOperator(grid, axis, hbar)
    return lambda s: apply_momentum(op, s)


def momentum_dispersion(grid, axis, psi, hbar=1.0):
    hbar = _hbar(hbar)
    _require_normalized(psi)
    if _is_seam_grid(grid):
        MomentumOperator(grid, axis, hbar)  # validates the axis
        rule, f, p = _seam_data(grid, axis, psi, hbar)
        mean = float(np.sum(rule.weights * np.conj(f.psi) * p).real)
        var = float(np.sum(rule.weights * np.abs(p - mean * f.psi) ** 2))
        return mean, _sqrt_var(var)
    return dispersion(_momentum_action(grid, axis, hbar), psi)


def cross_term(grid, axis, psi, hbar=1.0):
    """Im<x psi|p psi> by quadrature: sawtooth coordinate, spectral momentum."""
    hbar = _hbar(hbar)
    if psi.grid is not grid:
        raise ValueError("state and grid differ")
    if _is_seam_grid(grid):
        MomentumOperator(grid, axis, hbar)
        rule, f, p = _seam_data(grid, axis, psi, hbar)
        # X * conj(psi) is finite even where X is not (alpha = 1 at the seam)
        xs = rule.coordinate * np.conj(f.psi)
        return float(np.sum(rule.weights * xs * p).imag)
    X = coordinate_values(grid, axis)
    p = _momentum_action(grid, axis, hbar)(psi)
    return inner(WaveFunction(grid, X * psi.samples), p).imag


# ---------------------------------------------------------------------------
# closed forms


def boundary_circle(psi, hbar=1.0):
    """hbar/2 (1 - 2 pi R |psi(0)|^2) on the circle of radius R."""
    chart = psi.chart
    if not (isinstance(chart, CurveChart) and chart.is_circle):
        raise ValueError("boundary_circle needs a circle chart")
    v = seam_value(psi, "psi")
    return 0.5 * _hbar(hbar) * (1.0 - 2.0 * np.pi * chart.radius * abs(v) ** 2)


def boundary_curve(psi, hbar=1.0):
    """hbar/2 (1 - A h(0) |psi(0)|^2) on a closed curve."""
    chart = psi.chart
    if not isinstance(chart, CurveChart):
        raise ValueError("boundary_curve needs a curve chart")
    v = seam_value(psi, "psi")
    return 0.5 * _hbar(hbar) * (1.0 - chart.period * chart.h(0.0) * abs(v) ** 2)


def boundary_alpha(psi, hbar=1.0):
    """hbar/2 (1 - (2 R sin(alpha pi) / alpha) |psi(-pi)|^2); exactly hbar/2
    at alpha = 1."""
    chart = psi.chart
    if not isinstance(chart, AlphaChart):
        raise ValueError("boundary_alpha needs an alpha chart")
    a = chart.alpha
    if not 0.0 < a <= 1.0:
        raise ValueError(f"boundary_alpha needs 0 < alpha <= 1, got {a}")
    hbar = _hbar(hbar)
    if a == 1.0:
        return 0.5 * hbar
    if psi.weighted:
        v2 = abs(seam_value(psi, "chi")) ** 2 / chart.weight(-np.pi) ** 2
    else:
        v2 = abs(seam_value(psi, "psi")) ** 2
    return 0.5 * hbar * (1.0 - 2.0 * chart.radius * np.sin(a * np.pi) / a * v2)


def boundary_torus(psi, hbar=1.0, axis=0):
    """hbar/2 (1 - int dy sqrt(g(0,y)) A(y) |psi(0,y)|^2).

    sqrt(g)|psi|^2 is evaluated as |g^(1/4) psi|^2, interpolated along the
    fibre; the y integral uses the base grid. Serves every fibred chart,
    including the wrapped sphere (A = 2 pi).
    """
    grid = psi.grid
    if not isinstance(grid, Grid2D):
        raise ValueError("boundary_torus needs a fibred (torus or wrapped) chart")
    if axis == 0:
        chi0 = seam_value(psi)
        dy = grid.chart.base_period / grid.n2
        integral = float(np.sum(dy * grid.fibre_period * np.abs(chi0) ** 2))
    else:
        if not isinstance(grid.chart, WrappedChart):
            raise ValueError("only the wrapped sphere has a closed second coordinate")
        chi = grid.weight * psi.samples
        chi0 = spectral.interpolate(chi, [0.0], 2.0 * np.pi, 0.0, axis=1)[:, 0]
        integral = float(np.sum((2.0 * np.pi / grid.n1) * 2.0 * np.pi * np.abs(chi0) ** 2))
    return 0.5 * _hbar(hbar) * (1.0 - integral)


def boundary_analytic(grid, axis, psi, hbar=1.0):
    chart = grid.chart
    if isinstance(chart, CurveChart):
        return boundary_curve(psi, hbar)
    if isinstance(chart, AlphaChart):
        return boundary_alpha(psi, hbar)
    if isinstance(chart, TorusChart):
        return boundary_torus(psi, hbar)
    if isinstance(chart, WrappedChart):
        return boundary_torus(psi, hbar, axis)
    if isinstance(chart, (SphereChart, StereoChartN)):
        # no closed coordinate line: no seam term
        return 0.5 * _hbar(hbar)
    raise TypeError(f"no closed form for {chart!r}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class UncertaintyReport:
    chart: str
    state: str
    axis: int
    hbar: float
    mean_x: float
    delta_x: float
    mean_p: float
    delta_p: float
    product: float
    cross_term: float
    bound: float
    boundary_analytic: float
    defects: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        d = asdict(self)
        d["pass"] = self.passed
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), default=_json_default, sort_keys=True)

    CSV_COLUMNS = ("chart", "state", "mean_x", "delta_x", "mean_p", "delta_p", "product",
                   "bound", "boundary_analytic", "defects", "pass")

    def csv_row(self):
        d = self.to_dict()
        d["defects"] = ";".join(f"{k}={fmt(v)}" for k, v in sorted(self.defects.items()))
        return [fmt(d[c]) for c in self.CSV_COLUMNS]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        w.writerow(self.csv_row())
        return buf.getvalue()


def fmt(v):
    """12 significant digits for floats, plain text otherwise."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _json_default(o):
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o))


def _seam_moments(grid, axis, psi, hbar):
    rule, f, p = _seam_data(grid, axis, psi, hbar)
    W = rule.weights
    dens = W * np.abs(f.psi) ** 2
    X = rule.coordinate
    with np.errstate(invalid="ignore", over="ignore"):
        mean_x = float(np.sum(dens * X))
        var_x = float(np.sum(dens * (X - mean_x) ** 2))
    pp = np.sum(W * np.conj(f.psi) * p)
    mean_p = float(pp.real)
    var_p = float(np.sum(W * np.abs(p - mean_p * f.psi) ** 2))
    ct = float(np.sum(W * (X * np.conj(f.psi)) * p).imag)
    return mean_x, _sqrt_var(var_x), mean_p, _sqrt_var(var_p), ct, abs(float(pp.imag))


def report(grid, axis, psi, hbar=1.0, boundary_tol=1e-7):
    """Assemble means, dispersions, the cross term and its closed form."""
    hbar = _hbar(hbar)
    if psi.grid is not grid:
        raise ValueError("state and grid differ")
    nrm = _require_normalized(psi)
    if _is_seam_grid(grid):
        MomentumOperator(grid, axis, hbar)
        mean_x, delta_x, mean_p, delta_p, ct, sa_defect = _seam_moments(grid, axis, psi, hbar)
    else:
        mean_x, delta_x = coordinate_dispersion(grid, axis, psi)
        mean_p, delta_p = momentum_dispersion(grid, axis, psi, hbar)
        ct = cross_term(grid, axis, psi, hbar)
        p = _momentum_action(grid, axis, hbar)(psi)
        sa_defect = abs(inner(psi, p).imag)
    # sa_defect: <psi|p psi> must be real for a symmetric momentum
    bnd = boundary_analytic(grid, axis, psi, hbar)
    product = delta_x * delta_p if np.isfinite(delta_x) else float("inf")
    defects = {
        "normalization": abs(nrm - 1.0),
        "self_adjoint": sa_defect,
        "boundary": abs(ct - bnd),
    }
    checks = {
        "inequality": bool(product >= abs(ct) - INEQUALITY_SLACK),
        "boundary": bool(abs(ct - bnd) < boundary_tol),
    }
    return UncertaintyReport(
        chart=grid.chart.chart_id, state=psi.descriptor, axis=axis, hbar=hbar,
        mean_x=mean_x, delta_x=delta_x, mean_p=mean_p, delta_p=delta_p,
        product=product, cross_term=ct, bound=abs(ct), boundary_analytic=bnd,
        defects=defects, checks=checks)
