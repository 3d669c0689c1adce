import numpy as np
import pytest

from qcurv.scenarios import (SCENARIOS, ScenarioConfig, ScenarioResult, battery, run,
                             tuned_vonmises)
from qcurv.geometry import AlphaChart
from qcurv.state import make_grid, seam_value
from qcurv.uncertainty import boundary_alpha


def small(name, **kw):
    kw.setdefault("battery", 6)
    kw.setdefault("pairs", 4)
    return ScenarioConfig(name, **kw)


@pytest.mark.parametrize("bad", [dict(scenario="bogus"), dict(scenario="circle", hbar=0.0),
                                 dict(scenario="circle", radius=-1.0),
                                 dict(scenario="alpha-scan", alphas=(0.0,)),
                                 dict(scenario="alpha-scan", alphas=(1.2,)),
                                 dict(scenario="sphere-n", dims=(4,)),
                                 dict(scenario="circle", battery=-1)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        ScenarioConfig(**bad)


def test_config_round_trip_and_hash():
    cfg = ScenarioConfig("alpha-scan", alphas=[0.2, 0.4], states=["uniform"], seed=3)
    d = cfg.to_dict()
    assert ScenarioConfig.from_dict(d) == cfg
    assert ScenarioConfig.from_dict(d).config_hash() == cfg.config_hash()
    assert len(cfg.config_hash()) == 16
    assert ScenarioConfig("alpha-scan", alphas=[0.2, 0.4], seed=4).config_hash() != cfg.config_hash()
    with pytest.raises(ValueError, match="unknown"):
        ScenarioConfig.from_dict({"scenario": "circle", "colour": 1})


def test_default_resolution():
    assert ScenarioConfig("circle").n == 256
    assert ScenarioConfig("torus").n == 64
    assert ScenarioConfig("circle", resolution=128).n == 128


def test_battery_descriptors():
    b = battery(5, 3)
    assert b == ["random:seed=5,modes=6", "random:seed=6,modes=6", "random:seed=7,modes=6"]


def strip_timing(d):
    d = dict(d)
    d["summary"] = {k: v for k, v in d["summary"].items() if k != "timing_s"}
    d["summary"]["checks"] = [{k: v for k, v in c.items() if k != "detail"} for c in d["summary"]["checks"]]
    return d


@pytest.mark.parametrize("name", ["circle", "torus"])
def test_deterministic(name):
    a = run(small(name, seed=9)).to_dict()
    b = run(small(name, seed=9)).to_dict()
    assert strip_timing(a) == strip_timing(b)


@pytest.mark.parametrize("name", SCENARIOS)
def test_scenarios_pass_small(name):
    kw = {}
    if name == "alpha-scan":
        kw["alphas"] = (0.1, 0.5, 0.9, 1.0)
    if name in ("sphere-n", "sphere-stereo"):
        kw["dims"] = (1, 2, 3)
    res = run(small(name, **kw))
    failed = [c.name for c in res.checks if not c.passed]
    assert not failed
    assert res.passed
    assert res.reports
    h = res.config.config_hash()
    assert all(r["config_hash"] == h for r in res.to_dict()["reports"])


def test_sphere_n_table_records_exponents():
    res = run(small("sphere-n"))
    rows = {r["n"]: r for r in res.table}
    assert set(rows) == {1, 2, 3}
    for n, r in rows.items():
        assert r["error_2_minus_n"] < 1e-6
        if n == 2:
            assert r["error_4_minus_2n"] < 1e-6
        else:
            assert r["error_4_minus_2n"] > 1e-2


def test_failed_check_marks_result():
    res = ScenarioResult("circle", ScenarioConfig("circle"))
    res.check("ok", 0.0, 1.0)
    assert res.passed
    res.check("bad", 2.0, 1.0)
    res.check("nan", float("nan"), 1.0)
    assert not res.passed
    assert [c.passed for c in res.checks] == [True, False, False]
    res2 = ScenarioResult("circle", ScenarioConfig("circle"))
    res2.check("lower", 0.4, 0.5, upper=False)
    assert not res2.passed


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.95])
def test_tuned_vonmises(alpha):
    grid = make_grid(AlphaChart(1.0, alpha), 256)
    psi, kappa, target = tuned_vonmises(grid)
    assert kappa < 0
    assert abs(seam_value(psi, "psi")) ** 2 == pytest.approx(target, rel=1e-10)
    assert abs(boundary_alpha(psi)) < 1e-10


def test_alpha_scan_table():
    res = run(small("alpha-scan", alphas=(0.3, 1.0)))
    assert [r["alpha"] for r in res.table] == [0.3, 1.0]
    assert res.table[1]["boundary_analytic"] == 0.5
    assert np.isfinite(res.table[0]["vonmises_kappa"])
