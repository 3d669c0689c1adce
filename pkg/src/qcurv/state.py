"""Grids, quadrature and wavefunctions over the charts in :mod:`qcurv.geometry`.

Two quadratures coexist:

* the grid rule (``Grid.weights``), spectrally exact for periodic smooth
  integrands; used for scalar products.
* the seam rule (:func:`seam_rule`), Gauss-Legendre along the closed
  coordinate line with the periodic fields interpolated onto it. Integrands
  containing the sawtooth coordinate are smooth on the closed interval but
  jump at the seam, which the grid rule only handles to second order.

A wavefunction marked ``weighted`` is one whose band-limited (smooth
periodic) representation is ``w * psi`` rather than ``psi`` itself, ``w``
being the chart's momentum weight. The saturating states are of this kind.
"""

import ast
import csv
import io
import operator
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import spectral
from .geometry import (AlphaChart, CurveChart, SphereChart, StereoChartN, TorusChart,
                       WrappedChart)

MIN_RESOLUTION = 16
MAX_RESOLUTION = 8192

# Leading-order midpoint error of the wrapped-chart area element at its
# corner singularity: sum(sqrt(g)) * d^2 - 4 pi R^2 -> KAPPA * R^2 * d^2.
# Richardson-extrapolated from N = 256..4096.
WRAPPED_CORNER_KAPPA = 0.39910566


def _check_resolution(n):
    n = int(n)
    if not MIN_RESOLUTION <= n <= MAX_RESOLUTION:
        raise ValueError(f"resolution {n} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")
    if n % 2:
        raise ValueError(f"resolution must be even, got {n}")
    return n


@dataclass(frozen=True, eq=False)
class Grid1D:
    chart: object
    n: int

    @cached_property
    def nodes(self):
        return spectral.periodic_nodes(self.n, self.chart.period, self.chart.start)

    @cached_property
    def cell(self):
        return np.full(self.n, self.chart.period / self.n)

    @cached_property
    def weights(self):
        return self.chart.measure(self.nodes) * self.cell

    @property
    def shape(self):
        return (self.n,)

    @cached_property
    def weight(self):
        return self.chart.weight(self.nodes)

    def derivative(self, f):
        return spectral.derivative(f, self.chart.period)


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Fibred grid for torus and wrapped charts: axis 0 is the closed
    fibre coordinate (x or eta), axis 1 the base (y or xi)."""

    chart: object
    n1: int
    n2: int

    @property
    def shape(self):
        return (self.n1, self.n2)

    @cached_property
    def base(self):
        return spectral.periodic_nodes(self.n2, self.chart.base_period)

    @cached_property
    def fibre_period(self):
        return self.chart.fibre_period(self.base)

    @cached_property
    def fraction(self):
        return spectral.periodic_nodes(self.n1, 1.0)

    @cached_property
    def nodes(self):
        x = np.outer(self.fraction, self.fibre_period)
        y = np.broadcast_to(self.base, x.shape).copy()
        return x, y

    @cached_property
    def cell(self):
        return np.outer(np.ones(self.n1), self.fibre_period / self.n1) * (
            self.chart.base_period / self.n2)

    @cached_property
    def weights(self):
        w = self.chart.measure(*self.nodes) * self.cell
        if isinstance(self.chart, WrappedChart):
            # the four nodes around the corner (0, 0), all near the north pole
            corr = WRAPPED_CORNER_KAPPA * self.chart.radius ** 2 * self.cell[0, 0] / 4.0
            for i in (0, -1):
                for j in (0, -1):
                    w[i, j] -= corr
        return w

    @cached_property
    def weight(self):
        return self.chart.weight(*self.nodes)

    def derivative(self, f, axis=0):
        if axis == 0:
            return spectral.derivative(f, self.fibre_period, axis=0)
        if isinstance(self.chart, WrappedChart):
            return spectral.derivative(f, self.chart.base_period, axis=1)
        raise ValueError("only the fibre coordinate of the torus carries a momentum")


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss-Legendre nodes in cos(theta) times uniform nodes in phi."""

    chart: SphereChart
    n_theta: int
    n_phi: int

    @property
    def shape(self):
        return (self.n_theta, self.n_phi)

    @cached_property
    def _legendre(self):
        return spectral.legendre_diffmat(self.n_theta)

    @property
    def cos_theta(self):
        return self._legendre[0]

    @property
    def diffmat(self):
        """d/d(cos theta) on the Gauss-Legendre nodes."""
        return self._legendre[2]

    @cached_property
    def nodes(self):
        theta = np.arccos(self.cos_theta)
        phi = spectral.periodic_nodes(self.n_phi, 2.0 * np.pi)
        return np.meshgrid(theta, phi, indexing="ij")

    @cached_property
    def weights(self):
        wx = self._legendre[1]
        return self.chart.radius ** 2 * np.outer(wx, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))


@dataclass(frozen=True, eq=False)
class BoxGrid:
    """Uniform periodic box [-L, L)^n in stereographic coordinates.

    Test states must decay to round-off at the box edge (i.e. vanish fast at
    the north pole); weights then integrate the sphere measure up to the
    truncated tail.
    """

    chart: StereoChartN
    n: int
    half_width: float

    @property
    def shape(self):
        return (self.n,) * self.chart.n

    @cached_property
    def axis_nodes(self):
        return spectral.periodic_nodes(self.n, 2.0 * self.half_width, -self.half_width)

    @cached_property
    def nodes(self):
        return np.stack(np.meshgrid(*([self.axis_nodes] * self.chart.n), indexing="ij"))

    @cached_property
    def weights(self):
        return self.chart.surface_density(self.nodes) * (2.0 * self.half_width / self.n) ** self.chart.n

    def derivative(self, f, axis):
        return spectral.derivative(f, 2.0 * self.half_width, axis=axis)


def make_grid(chart, resolution=None, half_width=None):
    """Grid for ``chart``. ``resolution`` is an int or a per-axis pair."""
    if resolution is None:
        resolution = 256 if isinstance(chart, (CurveChart, AlphaChart)) else 64
    res = np.atleast_1d(resolution).astype(int)
    if isinstance(chart, (CurveChart, AlphaChart)):
        return Grid1D(chart, _check_resolution(res[0]))
    n1 = _check_resolution(res[0])
    n2 = _check_resolution(res[-1])
    if isinstance(chart, (TorusChart, WrappedChart)):
        return Grid2D(chart, n1, n2)
    if isinstance(chart, SphereChart):
        return SphereGrid(chart, n1, n2)
    if isinstance(chart, StereoChartN):
        if half_width is None:
            half_width = 8.0 * chart.radius
        return BoxGrid(chart, n1, float(half_width))
    raise TypeError(f"no grid for chart {chart!r}")


# ---------------------------------------------------------------------------
# wavefunctions


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: object
    samples: np.ndarray
    weighted: bool = False
    descriptor: str = ""

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.shape != tuple(self.grid.shape):
            raise ValueError(f"samples shape {s.shape} does not match grid {self.grid.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid, f, **kw):
        nodes = grid.nodes
        if isinstance(grid, BoxGrid):
            return cls(grid, f(nodes), **kw)
        if isinstance(nodes, tuple) or isinstance(nodes, list):
            return cls(grid, f(*nodes), **kw)
        return cls(grid, f(nodes), **kw)

    @property
    def chart(self):
        return self.grid.chart

    def smooth_field(self):
        """The field that is periodic and smooth along the seam axis."""
        if self.weighted:
            return self.grid.weight * self.samples
        return self.samples

    def _combine(self, other, op):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        _same_grid(self, other)
        return WaveFunction(self.grid, op(self.samples, other.samples),
                            self.weighted and other.weighted)

    def __add__(self, other):
        return self._combine(other, operator.add)

    def __sub__(self, other):
        return self._combine(other, operator.sub)

    def __mul__(self, a):
        return WaveFunction(self.grid, a * self.samples, self.weighted, self.descriptor)

    __rmul__ = __mul__

    def to_csv(self, path=None):
        """Write node coordinates and (re, im) columns; returns the text."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        nodes = self.grid.nodes
        if isinstance(self.grid, Grid1D):
            cols, names = [nodes], ["node"]
        elif isinstance(self.grid, BoxGrid):
            cols = list(nodes)
            names = [f"q{i + 1}" for i in range(len(cols))]
        else:
            cols, names = list(nodes), ["node1", "node2"]
        w.writerow(names + ["re", "im"])
        flat = [np.ravel(c) for c in cols]
        for idx, v in enumerate(np.ravel(self.samples)):
            w.writerow([f"{c[idx]:.12g}" for c in flat] + [f"{v.real:.12g}", f"{v.imag:.12g}"])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def _same_grid(a, b):
    if a.grid is not b.grid:
        raise ValueError("wavefunctions live on different grids")


def _needs_seam_rule(psi):
    return psi.weighted and isinstance(psi.chart, AlphaChart)


def _hdot(w, a, b):
    """sum(w conj(a) b) with real and imaginary parts formed separately, so
    that swapping a and b conjugates the result exactly."""
    a, b = np.asarray(a), np.asarray(b)
    re = np.sum(w * (a.real * b.real + a.imag * b.imag))
    im = np.sum(w * (a.real * b.imag - a.imag * b.real))
    return complex(re, im)


def inner(psi1, psi2):
    """Scalar product <psi1|psi2> under the chart measure."""
    _same_grid(psi1, psi2)
    if _needs_seam_rule(psi1) or _needs_seam_rule(psi2):
        rule = seam_rule(psi1.grid)
        f1 = seam_fields(psi1, rule)
        f2 = seam_fields(psi2, rule)
        return _hdot(rule.weights, f1.psi, f2.psi)
    if (psi1.weighted or psi2.weighted) and isinstance(psi1.grid, (Grid1D, Grid2D)):
        # half-density form; exact for band-limited w * psi
        c1 = psi1.grid.weight * psi1.samples
        c2 = psi2.grid.weight * psi2.samples
        return _hdot(psi1.grid.cell, c1, c2)
    return _hdot(psi1.grid.weights, psi1.samples, psi2.samples)


def norm(psi):
    return float(np.sqrt(max(inner(psi, psi).real, 0.0)))


def normalize(psi):
    nrm = norm(psi)
    if not nrm > 0.0 or not np.isfinite(nrm):
        raise ValueError("cannot normalize a zero (or non-finite) state")
    return WaveFunction(psi.grid, psi.samples / nrm, psi.weighted, psi.descriptor)


# ---------------------------------------------------------------------------
# seam quadrature


@dataclass(frozen=True)
class SeamRule:
    """Gauss-Legendre rule along the closed coordinate of a 1-D or fibred chart.

    Arrays have shape (Q,) in 1-D and (Q, n2) on fibred grids; ``axis``
    selects eta or xi on the wrapped sphere.
    """

    grid: object
    axis: int
    fraction: np.ndarray     # GL nodes as a fraction of the fibre, in (0, 1)
    t: np.ndarray            # seam-variable value at the nodes
    weights: np.ndarray      # includes the chart measure
    coordinate: np.ndarray   # value of the coordinate operator
    weight: np.ndarray       # momentum weight w
    weight_deriv: np.ndarray = field(default=None)
    scale: np.ndarray = field(default=None)


@lru_cache(maxsize=32)
def seam_rule(grid, axis=0, order=None):
    chart = grid.chart
    if isinstance(grid, Grid1D):
        q = order or grid.n
        u, wu = spectral.gauss_legendre(q, 0.0, 1.0)
        t = chart.start + u * chart.period
        return SeamRule(grid, 0, u, t, chart.measure(t) * wu * chart.period,
                        chart.coordinate(t), chart.weight(t), chart.weight_deriv(t),
                        chart.scale(t))
    if isinstance(grid, Grid2D):
        if axis not in (0, 1) or (axis == 1 and not isinstance(chart, WrappedChart)):
            raise ValueError(f"axis {axis} has no closed-coordinate momentum on {chart.chart_id}")
        q = order or (grid.n1 if axis == 0 else grid.n2)
        u, wu = spectral.gauss_legendre(q, 0.0, 1.0)
        if axis == 0:
            base = grid.base
            period = grid.fibre_period
            db = chart.base_period / grid.n2
        else:
            base = spectral.periodic_nodes(grid.n1, 2.0 * np.pi)
            period = np.full(grid.n1, 2.0 * np.pi)
            db = 2.0 * np.pi / grid.n1
        t = np.outer(u, period)
        b = np.broadcast_to(base, t.shape)
        # the wrapped chart is symmetric under eta <-> xi, so (t, b) order is fine
        meas = chart.measure(t, b)
        w = chart.weight(t, b)
        weights = meas * np.outer(wu, period) * db
        return SeamRule(grid, axis, u, t, weights, chart.coordinate(t, b), w,
                        None, np.ones_like(t))
    raise TypeError("seam quadrature needs a chart with a closed coordinate line")


@dataclass(frozen=True)
class SeamFields:
    psi: np.ndarray
    chi: np.ndarray   # w * psi
    dchi: np.ndarray  # d/dt (w * psi)


def seam_fields(psi, rule):
    """Evaluate psi, w*psi and its seam derivative at the rule's nodes."""
    grid = psi.grid
    if isinstance(grid, Grid1D):
        chart = grid.chart
        use_chi = psi.weighted or chart.weight_periodic
        f = psi.smooth_field() if use_chi else psi.samples
        if use_chi and not psi.weighted:
            f = grid.weight * psi.samples
        df = grid.derivative(f)
        fq = spectral.interpolate(f, rule.t, chart.period, chart.start)
        dfq = spectral.interpolate(df, rule.t, chart.period, chart.start)
        if use_chi:
            return SeamFields(fq / rule.weight, fq, dfq)
        return SeamFields(fq, rule.weight * fq, rule.weight_deriv * fq + rule.weight * dfq)
    # fibred 2-D grid: chi = w psi is the smooth field in every supported case
    chi = grid.weight * psi.samples
    if rule.axis == 1:
        chi = chi.T
        dchi = spectral.derivative(chi, 2.0 * np.pi, axis=0)
    else:
        dchi = grid.derivative(chi, axis=0)
    cq = spectral.interpolate(chi, rule.fraction, 1.0, 0.0, axis=0).T
    dq = spectral.interpolate(dchi, rule.fraction, 1.0, 0.0, axis=0).T
    return SeamFields(cq / rule.weight, cq, dq)


def seam_value(psi, which="chi"):
    """Trigonometric interpolation of psi (or w psi) onto the seam.

    Returns a scalar in 1-D and an array over the base nodes on fibred grids.
    """
    grid = psi.grid
    chart = grid.chart
    if isinstance(grid, Grid1D):
        f = grid.weight * psi.samples if (psi.weighted or which == "chi") else psi.samples
        v = spectral.interpolate(f, [chart.start], chart.period, chart.start)[0]
        if which == "chi" or not psi.weighted:
            return v
        return v / chart.weight(chart.start)
    chi = grid.weight * psi.samples
    return spectral.interpolate(chi, [0.0], 1.0, 0.0, axis=0)[:, 0]


# ---------------------------------------------------------------------------
# state descriptors

_ALLOWED_FUNCS = {"pi": np.pi}


def _eval_number(text):
    """Evaluate a numeric literal that may use pi and + - * / ."""
    ops = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.USub: operator.neg, ast.UAdd: operator.pos}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _ALLOWED_FUNCS:
            return _ALLOWED_FUNCS[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in ops:
            return ops[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in ops:
            return ops[type(node.op)](ev(node.operand))
        raise ValueError(f"malformed number {text!r}")

    try:
        return ev(ast.parse(text.strip().replace("π", "pi"), mode="eval"))
    except SyntaxError as exc:
        raise ValueError(f"malformed number {text!r}") from exc


def parse_descriptor(text):
    """'kind:a=1,b=pi/2' -> ('kind', {'a': 1, 'b': 1.5707...})."""
    kind, _, rest = text.strip().partition(":")
    if not kind:
        raise ValueError(f"malformed state descriptor {text!r}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq or not key.strip():
            raise ValueError(f"malformed parameter {item!r} in {text!r}")
        params[key.strip()] = _eval_number(val)
    return kind.strip(), params


def _integer(params, key, default=0):
    v = params.get(key, default)
    if float(v) != int(round(float(v))):
        raise ValueError(f"{key} must be an integer (momenta come in units of hbar), got {v}")
    return int(round(float(v)))


def _bump(r):
    """C-infinity bump: exp(1 - 1/(1 - r^2)) for |r| < 1, zero outside."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


def _smooth_step(s):
    """C-infinity step from 0 (s <= 0) to 1 (s >= 1)."""
    s = np.asarray(s, dtype=float)

    def f(x):
        return np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)

    a, b = f(s), f(1.0 - s)
    return a / (a + b)


def pole_cutoff(theta, radius=0.2, width=None):
    """Smooth factor vanishing for theta < radius and equal to 1 beyond
    radius + width."""
    width = radius if width is None else width
    return _smooth_step((np.asarray(theta) - radius) / width)


def _periodic_distance(t, c, period):
    return (np.asarray(t) - c + 0.5 * period) % period - 0.5 * period


def _random_coeffs(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def _sphere_angles(grid):
    if isinstance(grid, SphereGrid):
        return grid.nodes
    return grid.chart.unwrap_coords(*grid.nodes)


def _build_one(kind, params, grid):
    chart = grid.chart
    if kind == "uniform":
        return WaveFunction(grid, np.ones(grid.shape))

    if kind == "fourier":
        if isinstance(grid, Grid1D):
            k = _integer(params, "k")
            u = (grid.nodes - chart.start) / chart.period
            if isinstance(chart, AlphaChart) and chart.alpha == 1.0:
                raise ValueError("w^-1 plane waves are not normalizable at alpha = 1")
            return WaveFunction(grid, np.exp(2j * np.pi * k * u) / grid.weight, weighted=True)
        if isinstance(grid, Grid2D):
            k1 = _integer(params, "k1", params.get("k", 0))
            k2 = _integer(params, "k2", 0)
            x, y = grid.nodes
            phase = 2.0 * np.pi * k1 * x / grid.fibre_period[None, :]
            if isinstance(chart, WrappedChart):
                phase = phase + k2 * y
            elif k2:
                raise ValueError("torus plane waves take a single fibre number k")
            return WaveFunction(grid, np.exp(1j * phase) / grid.weight, weighted=True)
        raise ValueError(f"fourier states are undefined on {chart.chart_id}")

    if kind == "gauss":
        width = float(params.get("width", 0.4))
        if isinstance(grid, Grid1D):
            c = float(params.get("center", 0.0))
            k = _integer(params, "k", 0)
            t = grid.nodes
            A = chart.period
            g = sum(np.exp(-((t - c - n * A) ** 2) / (2 * width ** 2)) for n in range(-2, 3))
            return WaveFunction(grid, g * np.exp(2j * np.pi * k * (t - chart.start) / A))
        if isinstance(grid, (SphereGrid,)) or isinstance(chart, WrappedChart):
            q1c, q2c = float(params.get("q1", 0.0)), float(params.get("q2", 0.0))
            theta, phi = _sphere_angles(grid)
            rho = 2.0 * chart.radius / np.tan(0.5 * theta)
            q1, q2 = rho * np.cos(phi), rho * np.sin(phi)
            kk = float(params.get("k", 0.0))
            g = np.exp(-((q1 - q1c) ** 2 + (q2 - q2c) ** 2) / (2 * width ** 2) + 1j * kk * q1)
            return WaveFunction(grid, g)
        if isinstance(grid, Grid2D):
            x, y = grid.nodes
            u = x / grid.fibre_period[None, :]
            cu, cy = float(params.get("cx", 0.5)), float(params.get("cy", np.pi))
            B = chart.base_period
            du = _periodic_distance(u, cu, 1.0)
            dy = _periodic_distance(y, cy, B) / B
            return WaveFunction(grid, np.exp(-(du ** 2 + dy ** 2) / (2 * (width / (2 * np.pi)) ** 2)))
        if isinstance(grid, BoxGrid):
            q = grid.nodes
            centre = np.array([float(params.get(f"q{i + 1}", 0.0)) for i in range(chart.n)])
            r2 = np.sum((q - centre.reshape((-1,) + (1,) * chart.n)) ** 2, axis=0)
            return WaveFunction(grid, np.exp(-r2 / (2 * width ** 2)))
        raise ValueError(f"gauss states are undefined on {chart.chart_id}")

    if kind == "vonmises":
        if not isinstance(grid, Grid1D):
            raise ValueError("vonmises states are one-dimensional")
        c = float(params.get("center", 0.0))
        kappa = float(params.get("kappa", 1.0))
        return WaveFunction(grid, np.exp(kappa * np.cos(2 * np.pi * (grid.nodes - c) / chart.period)))

    if kind == "bump":
        if isinstance(grid, Grid1D):
            c = float(params.get("center", np.pi))
            width = float(params.get("width", 0.5))
            return WaveFunction(grid, _bump(_periodic_distance(grid.nodes, c, chart.period) / width))
        if isinstance(grid, SphereGrid) or isinstance(chart, WrappedChart):
            theta, phi = _sphere_angles(grid)
            th0, ph0 = float(params.get("theta", 0.0)), float(params.get("phi", 0.0))
            cosd = (np.cos(theta) * np.cos(th0)
                    + np.sin(theta) * np.sin(th0) * np.cos(phi - ph0))
            dist = np.arccos(np.clip(cosd, -1.0, 1.0))
            return WaveFunction(grid, pole_cutoff(dist, float(params.get("radius", 0.2)),
                                                  params.get("width")))
        if isinstance(grid, Grid2D):
            x, y = grid.nodes
            c = float(params.get("center", 0.5))
            width = float(params.get("width", 0.25))
            return WaveFunction(grid, _bump(_periodic_distance(x / grid.fibre_period, c, 1.0) / width))
        raise ValueError(f"bump states are undefined on {chart.chart_id}")

    if kind == "random":
        rng = np.random.default_rng(_integer(params, "seed", 0))
        modes = _integer(params, "modes", 6)
        if isinstance(grid, Grid1D):
            m = np.arange(-modes, modes + 1)
            c = _random_coeffs(rng, m.shape) / (1.0 + m ** 2)
            u = (grid.nodes - chart.start) / chart.period
            return WaveFunction(grid, np.exp(2j * np.pi * np.outer(u, m)) @ c)
        if isinstance(grid, Grid2D):
            modes = min(modes, 4)
            m = np.arange(-modes, modes + 1)
            c = _random_coeffs(rng, (m.size, m.size)) / np.outer(1.0 + m ** 2, 1.0 + m ** 2)
            x, y = grid.nodes
            u = x / grid.fibre_period[None, :]
            v = y / chart.base_period
            E1 = np.exp(2j * np.pi * u[..., None] * m)
            E2 = np.exp(2j * np.pi * v[..., None] * m)
            f = np.einsum("ija,ijb,ab->ij", E1, E2, c)
            if isinstance(chart, WrappedChart):
                return WaveFunction(grid, f / grid.weight, weighted=True)
            return WaveFunction(grid, f)
        if isinstance(grid, SphereGrid):
            degree = _integer(params, "degree", 3)
            order = _integer(params, "pole", 4)
            theta, phi = grid.nodes
            X, Y, Z = np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)
            f = np.zeros(grid.shape, dtype=complex)
            for a in range(degree + 1):
                for b in range(degree + 1 - a):
                    for c_ in range(degree + 1 - a - b):
                        d = 1.0 + (a + b + c_) ** 2
                        f = f + _random_coeffs(rng, ()) / d * X ** a * Y ** b * Z ** c_
            return WaveFunction(grid, (1.0 - Z) ** order * f)
        raise ValueError(f"random states are undefined on {chart.chart_id}")

    raise ValueError(f"unknown state kind {kind!r}")


def make_state(descriptor, grid):
    """Build a normalized state from a descriptor string.

    Grammar: ``kind[:key=value,...]`` with factors joined by ``*``; values
    are numbers and may use ``pi``. Kinds: uniform, fourier (k | k1,k2),
    gauss, vonmises, bump, random (seed, modes).
    """
    parts = [p for p in descriptor.split("*") if p.strip()]
    if not parts:
        raise ValueError("empty state descriptor")
    psi = None
    for part in parts:
        kind, params = parse_descriptor(part)
        factor = _build_one(kind, params, grid)
        if psi is None:
            psi = factor
        else:
            psi = WaveFunction(grid, psi.samples * factor.samples, psi.weighted and factor.weighted)
    psi = normalize(psi)
    return WaveFunction(grid, psi.samples, psi.weighted, descriptor)
