"""Coordinate charts on closed curves, the sphere and the torus.

Angles are radians throughout. Charts are immutable; every method is a pure
function of its arguments and vectorizes over numpy arrays.

Each one-dimensional chart exposes the same small vocabulary, used by the
operator and uncertainty code:

``period`` / ``start``
    the coordinate line is closed, sampled on ``[start, start + period)``.
``measure(t)``
    density of the scalar product in the grid variable ``t``.
``weight(t)`` / ``weight_deriv(t)``
    the momentum weight ``w`` and its derivative, so that
    ``p = (hbar/i) * scale(t) / w * d/dt (w .)``.
``scale(t)``
    ``dt/dx`` between the grid variable and the physical coordinate.
``coordinate(t)``
    the physical coordinate operator's value (sawtooth on the closed line).

They always satisfy ``measure * scale == weight**2``, which is what makes
the momentum symmetric.
"""

from dataclasses import dataclass, field

import numpy as np


class SingularPointError(ValueError):
    """Raised when a chart is evaluated at its coordinate singularity."""


def arccot(x):
    """Inverse cotangent on the branch with range (0, pi)."""
    x = np.asarray(x, dtype=float)
    return 0.5 * np.pi - np.arctan(x)


# ---------------------------------------------------------------------------
# one-dimensional charts


@dataclass(frozen=True)
class CurveChart:
    """Closed curve with coordinate phi in [0, A) and dl = h(phi) dphi.

    ``h(phi) = radius * (1 + eps * cos(harmonic * 2 pi phi / A))``; the plain
    circle is ``eps = 0``.
    """

    period: float = 2.0 * np.pi
    radius: float = 1.0
    eps: float = 0.0
    harmonic: int = 1
    start: float = field(default=0.0, init=False)
    weight_periodic: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.period <= 0 or self.radius <= 0:
            raise ValueError("period and radius must be positive")
        if not abs(self.eps) < 1:
            raise ValueError("|eps| < 1 is required for h > 0")

    @classmethod
    def circle(cls, radius=1.0):
        return cls(period=2.0 * np.pi, radius=radius)

    @property
    def chart_id(self):
        if self.eps == 0.0:
            return "circle"
        return "curve"

    @property
    def is_circle(self):
        return self.eps == 0.0

    def _arg(self, t):
        return self.harmonic * 2.0 * np.pi * np.asarray(t, dtype=float) / self.period

    def h(self, t):
        return self.radius * (1.0 + self.eps * np.cos(self._arg(t)))

    def h_deriv(self, t):
        k = self.harmonic * 2.0 * np.pi / self.period
        return -self.radius * self.eps * k * np.sin(self._arg(t))

    def measure(self, t):
        return self.h(t)

    def weight(self, t):
        return np.sqrt(self.h(t))

    def weight_deriv(self, t):
        return 0.5 * self.h_deriv(t) / np.sqrt(self.h(t))

    def scale(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def coordinate(self, t):
        return np.mod(np.asarray(t, dtype=float), self.period)

    @property
    def coordinate_jump(self):
        return self.period

    def total_measure(self):
        # the cosine term integrates to zero over a whole number of periods
        return self.radius * self.period

    def to_dict(self):
        return {"type": self.chart_id, "period": self.period, "radius": self.radius,
                "eps": self.eps, "harmonic": self.harmonic}


@dataclass(frozen=True)
class AlphaChart:
    """Circle of radius R with the deformed coordinate
    x = (2R/alpha) tan(alpha phi / 2), phi in [-pi, pi).

    ``alpha = 0`` is the plain angle chart x = R phi, ``alpha = 1`` is the
    stereographic line.
    """

    radius: float = 1.0
    alpha: float = 0.5
    period: float = field(default=2.0 * np.pi, init=False)
    start: float = field(default=-np.pi, init=False)
    weight_periodic: bool = field(default=False, init=False)
    chart_id: str = field(default="alpha", init=False)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def _c(self, t):
        return np.cos(0.5 * self.alpha * np.asarray(t, dtype=float))

    def coordinate(self, t):
        t = np.asarray(t, dtype=float)
        if self.alpha == 0.0:
            return self.radius * t
        return 2.0 * self.radius / self.alpha * np.tan(0.5 * self.alpha * t)

    def length_factor(self, t):
        """cos^2(alpha phi / 2), the factor in dl = cos^2(.) dx."""
        return self._c(t) ** 2

    def measure(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.radius)

    def weight(self, t):
        return self._c(t)

    def weight_deriv(self, t):
        return -0.5 * self.alpha * np.sin(0.5 * self.alpha * np.asarray(t, dtype=float))

    def scale(self, t):
        return self._c(t) ** 2 / self.radius

    @property
    def coordinate_jump(self):
        if self.alpha == 1.0:
            return np.inf
        return float(self.coordinate(np.pi) - self.coordinate(-np.pi))

    def total_measure(self):
        return 2.0 * np.pi * self.radius

    def to_dict(self):
        return {"type": "alpha", "radius": self.radius, "alpha": self.alpha}


# ---------------------------------------------------------------------------
# sphere


@dataclass(frozen=True)
class SphereChart:
    """Sphere of radius R in spherical angles with stereographic coordinates
    q1 = 2R cot(theta/2) cos(phi), q2 = 2R cot(theta/2) sin(phi)."""

    radius: float = 1.0
    chart_id: str = field(default="sphere-stereo", init=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def stereo_coords(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        if np.any(theta <= 0.0):
            raise SingularPointError("north pole (theta = 0) maps to infinity")
        rho = 2.0 * self.radius / np.tan(0.5 * theta)
        return rho * np.cos(phi), rho * np.sin(phi)

    def conformal_factor(self, theta):
        """sin^2(theta/2); equals (1 + |q|^2 / 4R^2)^-1."""
        return np.sin(0.5 * np.asarray(theta, dtype=float)) ** 2

    def conformal_factor_q(self, q1, q2):
        return 1.0 / (1.0 + (np.asarray(q1) ** 2 + np.asarray(q2) ** 2) / (4.0 * self.radius ** 2))

    def area_element(self, theta):
        """dS / (dtheta dphi)."""
        return self.radius ** 2 * np.sin(theta)

    def stereo_jacobian_det(self, theta):
        """|d(q1, q2) / d(theta, phi)|."""
        theta = np.asarray(theta, dtype=float)
        rho = 2.0 * self.radius / np.tan(0.5 * theta)
        drho = self.radius / np.sin(0.5 * theta) ** 2
        return rho * drho

    def total_measure(self):
        return 4.0 * np.pi * self.radius ** 2

    def to_dict(self):
        return {"type": "sphere-stereo", "radius": self.radius}


@dataclass(frozen=True)
class WrappedChart:
    """Sphere in the wrapped coordinates
    eta = 2 arccot(cot(theta/2) cos phi), xi = 2 arccot(cot(theta/2) sin phi).

    Both lie in (0, 2 pi); the lines eta = 0 and xi = 0 are all images of the
    north pole, the chart's only singular point.
    """

    radius: float = 1.0
    chart_id: str = field(default="sphere-wrapped", init=False)
    weight_periodic: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def wrap_coords(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        if np.any(theta <= 0.0):
            raise SingularPointError("the north pole has no wrapped coordinates")
        t = 1.0 / np.tan(0.5 * theta)
        return 2.0 * arccot(t * np.cos(phi)), 2.0 * arccot(t * np.sin(phi))

    def unwrap_coords(self, eta, xi):
        """Inverse of :meth:`wrap_coords`. At the south pole phi is set to 0."""
        a, b = self._cotangents(eta, xi)
        t = np.hypot(a, b)
        theta = 2.0 * np.arctan2(1.0, t)
        phi = np.mod(np.arctan2(b, a), 2.0 * np.pi)
        # cot(pi/2) is not exactly zero in floating point
        phi = np.where(t < 1e-12, 0.0, phi)
        return theta, phi

    def _cotangents(self, eta, xi):
        eta = np.mod(np.asarray(eta, dtype=float), 2.0 * np.pi)
        xi = np.mod(np.asarray(xi, dtype=float), 2.0 * np.pi)
        if np.any(eta == 0.0) or np.any(xi == 0.0):
            raise SingularPointError("eta = 0 or xi = 0 is the north pole")
        return 1.0 / np.tan(0.5 * eta), 1.0 / np.tan(0.5 * xi)

    def metric_det(self, theta, phi):
        """g in terms of the spherical angles; units R^4."""
        theta = np.asarray(theta, dtype=float)
        if np.any(theta <= 0.0):
            raise SingularPointError("metric is singular at the north pole")
        f1, f2 = self.length_factors(theta, phi)
        return self.radius ** 4 * f1 ** 2 * f2 ** 2

    def length_factors(self, theta, phi):
        """The two factors with dl^2 = R^2 (f1 deta^2 + f2 dxi^2)."""
        s = np.sin(0.5 * np.asarray(theta)) ** 2
        c = 1.0 - s
        return s + c * np.cos(phi) ** 2, s + c * np.sin(phi) ** 2

    def sqrt_metric(self, eta, xi):
        """sqrt(g) directly in (eta, xi); vanishes on the pole lines."""
        u = np.sin(0.5 * np.asarray(eta, dtype=float)) ** 2
        v = np.sin(0.5 * np.asarray(xi, dtype=float)) ** 2
        d = u + v - u * v
        return self.radius ** 2 * u * v / d ** 2

    def weight(self, eta, xi):
        """g^(1/4) in (eta, xi); positive on the open square."""
        se = np.sin(0.5 * np.asarray(eta, dtype=float))
        sx = np.sin(0.5 * np.asarray(xi, dtype=float))
        d = se ** 2 + sx ** 2 - (se * sx) ** 2
        return self.radius * se * sx / d

    def measure(self, eta, xi):
        return self.sqrt_metric(eta, xi)

    def wrapped_jacobian(self, eta, xi):
        """Partials of (theta, phi) w.r.t. (eta, xi).

        Returned with shape (..., 2, 2) as
        [[dtheta/deta, dphi/deta], [dtheta/dxi, dphi/dxi]].
        """
        a, b = self._cotangents(eta, xi)
        t2 = a ** 2 + b ** 2
        if np.any(t2 < 1e-28):
            raise SingularPointError("spherical angles are singular at the south pole")
        t = np.sqrt(t2)
        dth_deta = a * (1.0 + a ** 2) / (t * (1.0 + t2))
        dth_dxi = b * (1.0 + b ** 2) / (t * (1.0 + t2))
        dph_deta = b * (1.0 + a ** 2) / (2.0 * t2)
        dph_dxi = -a * (1.0 + b ** 2) / (2.0 * t2)
        return np.stack([np.stack([dth_deta, dph_deta], -1),
                         np.stack([dth_dxi, dph_dxi], -1)], -2)

    # fibred-chart vocabulary shared with TorusChart
    def fibre_period(self, base):
        return np.full_like(np.asarray(base, dtype=float), 2.0 * np.pi)

    base_period = 2.0 * np.pi

    def coordinate(self, x, base=None):
        return np.mod(np.asarray(x, dtype=float), 2.0 * np.pi)

    def total_measure(self):
        return 4.0 * np.pi * self.radius ** 2

    def to_dict(self):
        return {"type": "sphere-wrapped", "radius": self.radius}


@dataclass(frozen=True)
class StereoChartN:
    """S^n, n in {1, 2, 3}, in stereographic coordinates q_1..q_n."""

    n: int = 2
    radius: float = 1.0

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"stereographic charts are supported for n in {{1, 2, 3}}, got {self.n}")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def chart_id(self):
        return f"sphere-n{self.n}"

    def conformal_factor(self, q):
        """sin^2(theta/2) from the stacked coordinates q of shape (n, ...)."""
        r2 = np.sum(np.asarray(q) ** 2, axis=0)
        return 1.0 / (1.0 + r2 / (4.0 * self.radius ** 2))

    def surface_density(self, q):
        """dS / dq_1..dq_n = sin^(2n)(theta/2)."""
        return self.conformal_factor(q) ** self.n

    def polar_angle(self, q):
        r = np.sqrt(np.sum(np.asarray(q) ** 2, axis=0))
        return 2.0 * np.arctan2(2.0 * self.radius, r)

    def to_dict(self):
        return {"type": "sphere-n", "n": self.n, "radius": self.radius}


# ---------------------------------------------------------------------------
# torus


@dataclass(frozen=True)
class TorusChart:
    """Two-torus with fibre coordinate x in [0, A(y)) over a base y in [0, B).

    A(y) = 2 pi (1 + fibre_eps cos(2 pi y / B)) and
    g(x, y) = (1 + metric_eps cos(2 pi x / A(y)) cos(2 pi y / B))^2.

    ``reparam`` > 0 moves the chart by the smooth bijection
    x' = x + reparam * A sin(2 pi x / A) of every fibre; the metric
    determinant transforms as g' = g / (dx'/dx)^2.
    """

    base_period: float = 2.0 * np.pi
    fibre_eps: float = 0.3
    metric_eps: float = 0.2
    reparam: float = 0.0
    chart_id: str = field(default="torus", init=False)
    weight_periodic: bool = field(default=True, init=False)

    def __post_init__(self):
        if self.base_period <= 0:
            raise ValueError("base period must be positive")
        if not (abs(self.fibre_eps) < 1 and abs(self.metric_eps) < 1):
            raise ValueError("|fibre_eps| < 1 and |metric_eps| < 1 keep A and g positive")
        if not 0.0 <= 2.0 * np.pi * self.reparam < 1.0:
            raise ValueError("reparam must satisfy 0 <= 2 pi reparam < 1 for a bijection")

    def _ybar(self, y):
        return 2.0 * np.pi * np.asarray(y, dtype=float) / self.base_period

    def fibre_period(self, y):
        return 2.0 * np.pi * (1.0 + self.fibre_eps * np.cos(self._ybar(y)))

    def _u_original(self, u_new):
        """Invert u' = u + r sin(2 pi u) by Newton iteration (fibre fraction)."""
        u_new = np.asarray(u_new, dtype=float)
        if self.reparam == 0.0:
            return u_new
        u = u_new.copy()
        r = self.reparam
        for _ in range(50):
            f = u + r * np.sin(2.0 * np.pi * u) - u_new
            u = u - f / (1.0 + 2.0 * np.pi * r * np.cos(2.0 * np.pi * u))
            if np.max(np.abs(f)) < 1e-15:
                break
        return u

    def metric_det(self, x, y):
        x = np.asarray(x, dtype=float)
        A = self.fibre_period(y)
        u = self._u_original(np.mod(x, A) / A)
        g = (1.0 + self.metric_eps * np.cos(2.0 * np.pi * u) * np.cos(self._ybar(y))) ** 2
        if self.reparam:
            g = g / (1.0 + 2.0 * np.pi * self.reparam * np.cos(2.0 * np.pi * u)) ** 2
        return g

    def sqrt_metric(self, x, y):
        return np.sqrt(self.metric_det(x, y))

    def measure(self, x, y):
        return self.sqrt_metric(x, y)

    def weight(self, x, y):
        return self.metric_det(x, y) ** 0.25

    def coordinate(self, x, base=None):
        if base is None:
            return np.asarray(x, dtype=float)
        return np.mod(np.asarray(x, dtype=float), self.fibre_period(base))

    def reparameterized(self, amount=0.1):
        return TorusChart(self.base_period, self.fibre_eps, self.metric_eps, amount)

    def to_dict(self):
        return {"type": "torus", "base_period": self.base_period, "fibre_eps": self.fibre_eps,
                "metric_eps": self.metric_eps, "reparam": self.reparam}


def chart_from_dict(d):
    """Build a chart from its JSON description (see ``to_dict`` methods)."""
    d = dict(d)
    kind = d.pop("type")
    if kind == "circle":
        return CurveChart.circle(d.get("radius", 1.0))
    if kind == "curve":
        return CurveChart(**d)
    if kind == "alpha":
        return AlphaChart(**d)
    if kind == "sphere-stereo":
        return SphereChart(**d)
    if kind == "sphere-wrapped":
        return WrappedChart(**d)
    if kind == "sphere-n":
        return StereoChartN(**d)
    if kind == "torus":
        return TorusChart(**d)
    raise ValueError(f"unknown chart type {kind!r}")
