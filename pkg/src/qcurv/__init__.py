"""Coordinate and momentum operators on curved manifolds, and the
uncertainty relations they satisfy."""

from .geometry import (AlphaChart, CurveChart, SingularPointError, SphereChart, StereoChartN,
                       TorusChart, WrappedChart, chart_from_dict)
from .kernels import BACKEND
from .operators import (MomentumOperator, PlanckConstant, UnsupportedOperatorError,
                        apply_coordinate, apply_momentum, commutator_matrix_element,
                        kinetic_factorized, kinetic_lb, sawtooth_commutator, stereo_momentum)
from .scenarios import ScenarioConfig, ScenarioResult, run, selftest
from .state import WaveFunction, inner, make_grid, make_state, norm, normalize
from .uncertainty import (UncertaintyReport, boundary_alpha, boundary_circle, boundary_curve,
                          boundary_torus, cross_term, dispersion, report)

__version__ = "0.1.0"

__all__ = [
    "AlphaChart", "CurveChart", "SingularPointError", "SphereChart", "StereoChartN", "TorusChart",
    "WrappedChart", "chart_from_dict", "BACKEND", "MomentumOperator", "PlanckConstant",
    "UnsupportedOperatorError", "apply_coordinate", "apply_momentum", "commutator_matrix_element",
    "kinetic_factorized", "kinetic_lb", "sawtooth_commutator", "stereo_momentum",
    "ScenarioConfig", "ScenarioResult", "run", "selftest", "WaveFunction", "inner", "make_grid",
    "make_state", "norm", "normalize", "UncertaintyReport", "boundary_alpha", "boundary_circle",
    "boundary_curve", "boundary_torus", "cross_term", "dispersion", "report",
]
