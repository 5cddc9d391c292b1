import json
import math
import re
from pathlib import Path

import pytest

from src.config import load_config, load_settings, parse_config
from src.errors import ConfigError
from src.models import TWO_PI, Branch


def _doc(**overrides):
    base = {"delta_theta": {"kind": "two_pi_fraction", "p": 1, "q": 3}, "omega1": 12.0}
    base.update(overrides)
    return json.dumps(base)


@pytest.mark.parametrize("overrides,message", [
    ({"omega1": 0.0}, "omega1 must be positive"),
    ({"omega1": -3.0}, "omega1 must be positive"),
    ({"g": 0.0}, "g must be positive"),
    ({"ell": -1.0}, "ell must be positive"),
    ({"steps": 0}, "steps must be at least 1"),
    ({"p_sign": "x"}, "p_sign must be '+' or '-'"),
    ({"delta_theta": {"kind": "radians", "value": math.pi}}, "strictly between 0 and pi"),
    ({"delta_theta": {"kind": "radians", "value": 0.0}}, "strictly between 0 and pi"),
    ({"delta_theta": {"kind": "two_pi_fraction", "p": 1, "q": 2}}, "strictly between 0 and pi"),
    ({"delta_theta": {"kind": "two_pi_fraction", "p": 2, "q": 6}}, "lowest terms"),
    ({"delta_theta": {"kind": "two_pi_scale", "value": 0.5}}, "strictly between 0 and pi"),
    ({"branch": {"overrides": [{"index": 0}]}}, "at least 1"),
])
def test_invalid_documents(overrides, message):
    with pytest.raises(ConfigError, match=re.escape(message)):
        parse_config(_doc(**overrides))


def test_missing_omega_is_reported():
    with pytest.raises(ConfigError, match="omega1"):
        parse_config(json.dumps({"delta_theta": {"kind": "radians", "value": 1.0}}))


def test_defaults():
    config = parse_config(_doc())
    assert config.g == 9.81 and config.ell == 1.0
    assert config.steps == 1200
    assert config.sign == -1
    assert config.branch.default is Branch.POSITIVE


def test_resolve_fraction_and_half_step():
    config = parse_config(_doc(theta1="half_step", p_sign="+"))
    params, theta1, policy = config.resolve()
    assert params.period == 3
    assert params.p_value > 0.0
    assert theta1 == pytest.approx(TWO_PI / 6)
    assert policy.branch_for(1, theta1) is Branch.POSITIVE


def test_unicode_minus_is_accepted():
    assert parse_config(_doc(p_sign="−")).sign == -1


@pytest.mark.parametrize("delta,expected", [
    ({"kind": "radians", "value": 1.0}, 1.0),
    ({"kind": "two_pi_scale", "value": 0.2828427124746190}, TWO_PI * 0.2828427124746190),
])
def test_resolve_real_steps_have_no_period(delta, expected):
    params, theta1, _ = parse_config(_doc(delta_theta=delta, theta1=0.25)).resolve()
    assert params.delta_theta == pytest.approx(expected, rel=1e-15)
    assert params.period is None
    assert theta1 == 0.25


def test_branch_overrides_become_policy():
    config = parse_config(_doc(branch={
        "overrides": [{"index": 3}],
        "angle_overrides": [{"angle": 4.18879020478639, "branch": "negative"}],
    }))
    _, _, policy = config.resolve()
    assert policy.branch_for(3, 0.0) is Branch.NEGATIVE
    assert policy.branch_for(2, 0.0) is Branch.POSITIVE
    assert policy.branch_for(5, 2 * TWO_PI / 3) is Branch.NEGATIVE


def test_branch_names_match_config_values():
    assert [b.value for b in Branch] == ["positive", "negative"]
    assert not [name for name, value in vars(Branch).items() if callable(value) and not name.startswith("_")]


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        load_config(tmp_path / "absent.json")


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding='utf-8')
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_reads_file(write_config):
    path = write_config({"delta_theta": {"kind": "two_pi_fraction", "p": 1, "q": 6}, "omega1": 8.0,
                         "steps": 7})
    config = load_config(path)
    assert config.steps == 7 and config.omega1 == 8.0


def test_settings_from_environment():
    settings = load_settings({"ROTORMAP_OUTPUT_DIR": "/tmp/out", "ROTORMAP_LOG_LEVEL": "debug",
                              "ROTORMAP_WORKERS": "2"})
    assert settings.output_dir == Path("/tmp/out")
    assert settings.log_level == "DEBUG"
    assert settings.workers == 2


def test_settings_defaults():
    settings = load_settings({})
    assert settings.output_dir == Path("./artifacts")
    assert settings.workers == 4


@pytest.mark.parametrize("workers", ["0", "many"])
def test_settings_reject_bad_workers(workers):
    with pytest.raises(ConfigError, match="workers"):
        load_settings({"ROTORMAP_WORKERS": workers})


@pytest.mark.parametrize("path", sorted((Path(__file__).parent.parent / "configs").glob("*.json")),
                         ids=lambda p: p.stem)
def test_sample_configs_are_valid(path):
    params, _, _ = load_config(path).resolve()
    assert 0.0 < params.delta_theta < math.pi
