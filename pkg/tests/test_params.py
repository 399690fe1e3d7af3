import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rpa_cvqkd.errors import ConfigError, ParameterError
from rpa_cvqkd.params import (
    AttackScenario,
    SystemParams,
    config_from_dict,
    effective_v,
    load_config,
    preset,
    transmittance,
)


def test_transmittance_20km():
    assert transmittance(0.2, 20.0) == pytest.approx(0.39810717055349726, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 0.2, 3.0])
def test_transmittance_zero_length(alpha):
    assert transmittance(alpha, 0.0) == 1.0


def test_transmittance_lossless():
    assert transmittance(0.0, 100.0) == 1.0


@pytest.mark.parametrize("args", [(-0.1, 1.0), (0.2, -1.0)])
def test_transmittance_rejects_negative(args):
    with pytest.raises(ParameterError):
        transmittance(*args)


@given(
    st.floats(0.0, 1.0),
    st.floats(0.0, 100.0),
    st.floats(0.0, 100.0),
)
def test_transmittance_multiplicative(alpha, l1, l2):
    joined = transmittance(alpha, l1 + l2)
    split = transmittance(alpha, l1) * transmittance(alpha, l2)
    assert joined == pytest.approx(split, rel=1e-12, abs=1e-300)


@given(st.floats(0.01, 1.0), st.floats(0.1, 50.0), st.floats(1e-3, 5.0))
def test_transmittance_decreasing(alpha, length, step):
    t = transmittance(alpha, length)
    assert transmittance(alpha + step, length) < t
    assert transmittance(alpha, length + step) < t


@pytest.mark.parametrize("v_a, expected", [(4.0, 5.0), (1.0, 2.0), (1e-12, 1.0 + 1e-12)])
def test_effective_v(v_a, expected):
    assert effective_v(SystemParams(v_a=v_a)) == expected


def test_paper_preset_values():
    p = preset("paper2017")
    assert (p.v_a, p.beta, p.eta, p.v_ele, p.xi_e) == (4.0, 0.97, 0.5, 0.01, 0.01)
    assert (p.f_rep, p.dnu_a, p.dnu_b, p.ref_amp_ratio, p.alpha_std) == (1e8, 1.9e3, 1.9e3, 100.0, 0.2)
    assert p.e_ref_sq == 400.0
    assert p.n0 == 1.0


@pytest.mark.parametrize(
    "bad",
    [
        {"v_a": 0.0},
        {"beta": 1.5},
        {"eta": 0.0},
        {"v_ele": -1e-3},
        {"f_rep": 0.0},
        {"ref_amp_ratio": -1.0},
        {"n0": 2.0},
        {"xi_e": math.nan},
    ],
)
def test_params_invariants(bad):
    with pytest.raises(ParameterError):
        SystemParams(**bad)


def test_scenario_alpha_low_above_std():
    with pytest.raises(ParameterError):
        AttackScenario(10.0, 0.3).check_against(preset())


def test_config_preset_fills_missing():
    cfg = config_from_dict({"preset": "paper2017", "length_km": 12.5, "v_a": 3.0})
    assert cfg.params.v_a == 3.0
    assert cfg.params.beta == 0.97
    assert cfg.scenario.length_km == 12.5


def test_config_without_preset_requires_all_keys():
    with pytest.raises(ConfigError, match="missing"):
        config_from_dict({"v_a": 4.0})


def test_config_full_document_without_preset():
    doc = {
        "v_a": 4, "beta": 0.97, "eta": 0.5, "v_ele": 0.01, "xi_e": 0.01, "f_rep": 1e8,
        "dnu_a": 1.9e3, "dnu_b": 1.9e3, "ref_amp_ratio": 100, "alpha_std": 0.2,
        "length_km": 20, "alpha_low": 0.1419,
    }
    cfg = config_from_dict(doc)
    assert cfg.params == preset()
    assert cfg.scenario.alpha_low == 0.1419


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown"):
        config_from_dict({"preset": "paper2017", "wavelength": 1550})


def test_config_options_and_bad_values():
    cfg = config_from_dict({"preset": "paper2017", "keff_denominator": "as_printed"})
    assert cfg.options.keff_denominator == "as_printed"
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "paper2017", "chi_t_mode": "sometimes"})
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "paper2017", "eta": "half"})
    with pytest.raises(ConfigError):
        config_from_dict({"preset": "paper2017", "alpha_low": 0.5})


def test_load_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"preset": "paper2017", "alpha_low": 0.1}))
    assert load_config(path).scenario.alpha_low == 0.1
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)
