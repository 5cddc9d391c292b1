"""
Shared fixtures: the parameter sets the reference tables are built on
"""

import json
import math

import pytest

from src.dynamics.core_map import make_params, params_from_fraction

SQRT2_OVER_5 = 0.2828427124746190


@pytest.fixture
def n3_neg():
    return params_from_fraction(1, 3, p_sign=-1)


@pytest.fixture
def n3_pos():
    return params_from_fraction(1, 3, p_sign=1)


@pytest.fixture
def n4_neg():
    return params_from_fraction(1, 4, p_sign=-1)


@pytest.fixture
def n6_neg():
    return params_from_fraction(1, 6, p_sign=-1)


@pytest.fixture
def irrational_neg():
    return make_params(2.0 * math.pi * SQRT2_OVER_5, p_sign=-1)


@pytest.fixture
def write_config(tmp_path):
    """Write an experiment config dict to a JSON file and return its path"""
    def _write(data, name="case.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return path

    return _write
