import numpy as np
import pytest

from qcurv import oracles
from qcurv.geometry import AlphaChart, CurveChart, SphereChart, StereoChartN, TorusChart, WrappedChart
from qcurv.operators import (MomentumOperator, PlanckConstant, UnsupportedOperatorError,
                             apply_coordinate, box_momentum, commutator_matrix_element,
                             coordinate_values, kinetic_factorized, kinetic_lb,
                             sawtooth_commutator, stereo_momentum)
from qcurv.state import WaveFunction, inner, make_grid, make_state, normalize, seam_fields, seam_rule


def adjoint_defect(op, a, b):
    if isinstance(a.chart, AlphaChart):
        # p psi has a kink at the seam; integrate on the seam rule instead
        rule = seam_rule(a.grid)
        fa, fb = seam_fields(a, rule), seam_fields(b, rule)
        pa, pb = (-1j * rule.scale / rule.weight * f.dchi for f in (fa, fb))
        W = rule.weights
        return abs(np.sum(W * np.conj(fa.psi) * pb) - np.sum(W * np.conj(pa) * fb.psi))
    return abs(inner(a, op(b)) - inner(op(a), b))


def test_planck_constant_positive():
    assert float(PlanckConstant()) == 1.0
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(ValueError):
            PlanckConstant(bad)


@pytest.mark.parametrize("hbar", [1.0, 0.5])
@pytest.mark.parametrize("k", range(-3, 4))
def test_circle_eigenstates(k, hbar):
    grid = make_grid(CurveChart.circle(1.0), 64)
    psi = make_state(f"fourier:k={k}", grid)
    out = MomentumOperator(grid, 0, hbar)(psi)
    assert np.allclose(out.samples, k * hbar * psi.samples, atol=1e-12)


def test_curve_eigenstates():
    chart = CurveChart(period=3.0, eps=0.3)
    grid = make_grid(chart, 128)
    psi = make_state("fourier:k=2", grid)
    out = MomentumOperator(grid)(psi)
    assert np.allclose(out.samples, 2 * np.pi * 2 / 3.0 * psi.samples, atol=1e-10)


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_alpha_plane_wave(alpha):
    # w^-1 e^{ik phi} is mapped to hbar k (dphi/dx) times itself
    chart = AlphaChart(1.0, alpha)
    grid = make_grid(chart, 128)
    psi = make_state("fourier:k=2", grid)
    out = MomentumOperator(grid, 0, 0.5)(psi)
    assert np.allclose(out.samples, 0.5 * 2 * chart.scale(grid.nodes) * psi.samples, atol=1e-10)


def test_wrapped_eigenstate():
    grid = make_grid(WrappedChart(), 64)
    psi = make_state("fourier:k1=1,k2=0", grid)
    out = MomentumOperator(grid, 0)(psi)
    assert np.max(np.abs(out.samples - psi.samples)) < 1e-8
    psi = make_state("fourier:k1=-1,k2=2", grid)
    assert np.max(np.abs(MomentumOperator(grid, 1)(psi).samples - 2 * psi.samples)) < 1e-8


def test_torus_eigenstate_eigenvalue_varies_with_fibre():
    grid = make_grid(TorusChart(), 64)
    psi = make_state("fourier:k=2", grid)
    out = MomentumOperator(grid, 0)(psi)
    lam = 2 * np.pi * 2 / grid.fibre_period
    assert np.max(np.abs(out.samples - lam[None, :] * psi.samples)) < 1e-8


def test_sphere_angle_momentum_unsupported():
    grid = make_grid(SphereChart(), 16)
    with pytest.raises(UnsupportedOperatorError, match="self-adjoint"):
        MomentumOperator(grid, 0)
    with pytest.raises(UnsupportedOperatorError):
        MomentumOperator(make_grid(TorusChart(), 16), 1)
    with pytest.raises(UnsupportedOperatorError):
        MomentumOperator(make_grid(StereoChartN(2), 16), 0)


def test_operator_grid_mismatch():
    g1 = make_grid(CurveChart.circle(), 32)
    g2 = make_grid(CurveChart.circle(), 32)
    with pytest.raises(ValueError):
        MomentumOperator(g1)(make_state("uniform", g2))


@pytest.mark.parametrize("chart,axis,desc", [
    (CurveChart.circle(1.5), 0, "random:seed={}"),
    (CurveChart(eps=0.4, harmonic=2), 0, "random:seed={}"),
    (AlphaChart(1.0, 0.5), 0, "random:seed={}"),
    (AlphaChart(1.0, 0.5), 0, "gauss:width=0.4,center={}/10"),
    (AlphaChart(1.0, 1.0), 0, "random:seed={}"),
    (TorusChart(), 0, "random:seed={}"),
    (WrappedChart(), 0, "random:seed={}"),
    (WrappedChart(), 1, "random:seed={}"),
])
def test_self_adjoint_battery(chart, axis, desc):
    grid = make_grid(chart, 128 if isinstance(chart, (CurveChart, AlphaChart)) else 32)
    op = MomentumOperator(grid, axis)
    states = [make_state(desc.format(s), grid) for s in range(20)]
    worst = max(adjoint_defect(op, a, b) for a, b in zip(states, states[1:]))
    assert worst < 1e-8


def test_linearity():
    grid = make_grid(CurveChart(eps=0.3), 64)
    op = MomentumOperator(grid)
    a, b = make_state("random:seed=1", grid), make_state("gauss:width=0.5", grid)
    lhs = op((2 - 1j) * a + 0.5 * b).samples
    rhs = (2 - 1j) * op(a).samples + 0.5 * op(b).samples
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# -- coordinates


def test_coordinate_examples():
    grid = make_grid(CurveChart.circle(1.0), 64)
    psi = make_state("uniform", grid)
    assert inner(psi, apply_coordinate(grid, 0, psi)).real == pytest.approx(np.pi, abs=1e-12)
    assert AlphaChart(1.0, 0.5).coordinate(np.pi / 2) == pytest.approx(4 * np.tan(np.pi / 8))
    sg = make_grid(SphereChart(1.0), 16)
    q1 = coordinate_values(sg, 0)
    theta, phi = sg.nodes
    assert np.allclose(q1, 2 / np.tan(theta / 2) * np.cos(phi))
    with pytest.raises(UnsupportedOperatorError):
        coordinate_values(make_grid(TorusChart(), 16), 1)


# -- delta-comb commutator


def test_commutator_uniform_vanishes():
    grid = make_grid(CurveChart.circle(1.0), 64)
    psi = make_state("uniform", grid)
    assert abs(commutator_matrix_element(psi, psi)) < 1e-12


@pytest.mark.parametrize("hbar", [1.0, 0.5])
def test_commutator_bump_is_i_hbar(hbar):
    grid = make_grid(CurveChart.circle(1.0), 512)
    psi = make_state("bump:center=pi,width=0.5", grid)
    assert commutator_matrix_element(psi, psi, hbar) == pytest.approx(1j * hbar, abs=1e-12)


@pytest.mark.parametrize("chart", [CurveChart.circle(1.0), CurveChart(eps=0.3)])
def test_commutator_matches_sawtooth_oracle(chart):
    grid = make_grid(chart, 128)
    for s in range(10):
        a, b = make_state(f"random:seed={s}", grid), make_state(f"random:seed={s + 100}", grid)
        assert abs(commutator_matrix_element(a, b) - sawtooth_commutator(a, b)) < 1e-6


def test_commutator_requires_curve():
    grid = make_grid(AlphaChart(1.0, 0.5), 64)
    psi = make_state("uniform", grid)
    with pytest.raises(UnsupportedOperatorError):
        commutator_matrix_element(psi, psi)


# -- stereographic sphere


@pytest.fixture(scope="module")
def sphere():
    grid = make_grid(SphereChart(1.0), 48)
    states = [make_state(f"random:seed={s},degree=3,pole=4", grid) for s in range(6)]
    return grid, states


def test_stereo_canonical_commutators(sphere):
    grid, states = sphere
    for a, b in zip(states, states[1:]):
        for i in (1, 2):
            q = coordinate_values(grid, i - 1)
            qp = WaveFunction(grid, q * stereo_momentum(i, b).samples)
            pq = stereo_momentum(i, WaveFunction(grid, q * b.samples))
            assert abs(inner(a, qp) - inner(a, pq) - 1j * inner(a, b)) < 1e-6
        p12 = stereo_momentum(1, stereo_momentum(2, b))
        p21 = stereo_momentum(2, stereo_momentum(1, b))
        assert abs(inner(a, p12) - inner(a, p21)) < 1e-6


def test_stereo_momentum_self_adjoint(sphere):
    grid, states = sphere
    for i in (1, 2):
        op = lambda s: stereo_momentum(i, s)
        for a, b in zip(states, states[1:]):
            assert adjoint_defect(op, a, b) < 1e-6


def test_stereo_momentum_index():
    grid = make_grid(SphereChart(), 16)
    with pytest.raises(ValueError):
        stereo_momentum(3, make_state("uniform", grid))
    with pytest.raises(UnsupportedOperatorError):
        stereo_momentum(1, make_state("uniform", make_grid(TorusChart(), 16)))


@pytest.mark.parametrize("R,hbar", [(1.0, 1.0), (2.0, 0.5)])
def test_kinetic_lb_spherical_harmonics(R, hbar):
    grid = make_grid(SphereChart(R), 32)
    theta, phi = grid.nodes
    for f, l in ((np.ones_like(theta), 0), (np.cos(theta), 1), (np.sin(theta) * np.cos(phi), 1),
                 (3 * np.cos(theta) ** 2 - 1, 2), (np.sin(theta) ** 3 * np.exp(3j * phi), 3)):
        psi = WaveFunction(grid, f)
        lam = oracles.sphere_harmonic_eigenvalue(l, R, hbar)
        assert np.max(np.abs(kinetic_lb(psi, hbar).samples - lam * f)) < 1e-10 * max(1, lam)


def test_factorization_identity_n2():
    grid = make_grid(SphereChart(1.0), 48)
    for s in range(4):
        psi = make_state(f"random:seed={s},degree=2,pole=2", grid)
        lb = kinetic_lb(psi).samples
        fk = kinetic_factorized(psi).samples
        assert np.max(np.abs(fk - lb)) / np.max(np.abs(lb)) < 1e-6
        assert np.max(np.abs(kinetic_factorized(psi, inner_exponent="4-2n").samples - lb)) \
            / np.max(np.abs(lb)) < 1e-6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_factorized_radial_oracle(n):
    R = 1.0
    grid = make_grid(StereoChartN(n, R), 64 if n < 3 else 48)
    f, df, d2f = oracles.gaussian_profile(R)
    rho = np.sqrt(np.sum(grid.nodes ** 2, axis=0))
    ref = oracles.radial_kinetic_sn(n, R, f, df, d2f, rho)
    psi = WaveFunction(grid, f(rho))
    err = np.max(np.abs(kinetic_factorized(psi).samples - ref)) / np.max(np.abs(ref))
    assert err < 1e-6
    alt = np.max(np.abs(kinetic_factorized(psi, inner_exponent="4-2n").samples - ref)) / np.max(np.abs(ref))
    if n == 2:
        assert alt < 1e-6
    else:
        assert alt > 1e-2


def test_factorized_constant_is_zero():
    grid = make_grid(SphereChart(), 32)
    assert np.max(np.abs(kinetic_factorized(make_state("uniform", grid)).samples)) < 1e-10


@pytest.mark.parametrize("n", [1, 3])
def test_box_canonical_commutator(n):
    grid = make_grid(StereoChartN(n), 64 if n == 1 else 48)
    a = normalize(make_state("gauss:q1=0.3,width=1", grid))
    b = normalize(make_state("gauss:q1=-0.2,width=0.8", grid))
    for i in range(n):
        q = grid.nodes[i]
        pq = box_momentum(i + 1, WaveFunction(grid, q * b.samples))
        qp = WaveFunction(grid, q * box_momentum(i + 1, b).samples)
        assert abs(inner(a, qp) - inner(a, pq) - 1j * inner(a, b)) < 1e-6
    with pytest.raises(ValueError):
        box_momentum(n + 1, a)


def test_kinetic_unsupported_dimension():
    with pytest.raises(ValueError):
        StereoChartN(5)
    with pytest.raises(UnsupportedOperatorError):
        kinetic_factorized(make_state("uniform", make_grid(CurveChart.circle(), 32)))
