import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.dynamics.core_map import circle_sin, solve_roots
from src.dynamics.invariant import invariant_step
from src.dynamics.series import (expand_positive, invariant_series_convergent, one_step_deviation,
                                 series_invariant, series_negative, series_positive, taylor_convergent)
from src.errors import SeriesDomainError
from src.models import TWO_PI

HALF_PI = math.pi / 2


@pytest.fixture
def p(n3_neg):
    return n3_neg.p_value


def _x(theta, omega, p_value):
    return abs(p_value * math.sin(theta) / omega ** 2)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_zero_angle_leaves_omega(order, p):
    assert series_positive(0.0, 12.0, p, order) == 12.0
    assert series_negative(0.0, 12.0, p, order) == 0.0
    assert series_invariant(0.0, 12.0, p, order) == 12.0


def test_positive_series_tracks_exact_root(p):
    omega = 30.0
    exact, _ = solve_roots(HALF_PI, omega, p)
    # fifth coefficient is 90, and with x < 0 every later term adds to it
    bound = 200.0 * _x(HALF_PI, omega, p) ** 5 * omega
    assert abs(series_positive(HALF_PI, omega, p, 4) - exact) <= bound


def test_negative_series_tracks_exact_root(p):
    omega = 30.0
    _, exact = solve_roots(HALF_PI, omega, p)
    assert exact == pytest.approx(abs(p) / omega, rel=0.1)
    bound = 200.0 * _x(HALF_PI, omega, p) ** 5 * omega
    assert abs(series_negative(HALF_PI, omega, p, 4) - exact) <= bound


def test_invariant_series_tracks_invariant_step(p):
    omega = 30.0
    bound = 100.0 * _x(HALF_PI, omega, p) ** 5 * omega
    assert abs(series_invariant(HALF_PI, omega, p, 4) - invariant_step(HALF_PI, omega, p)) <= bound


def test_higher_order_is_closer(p):
    omega = 30.0
    exact, _ = solve_roots(HALF_PI, omega, p)
    errors = [abs(series_positive(HALF_PI, omega, p, n) - exact) for n in (1, 2, 3, 4)]
    assert errors[1] < errors[0]
    assert errors[2] < errors[1]
    assert errors[3] < errors[2]


def test_root_sum_of_series(p):
    omega = 30.0
    total = series_positive(HALF_PI, omega, p, 4) + series_negative(HALF_PI, omega, p, 4)
    assert total == pytest.approx(omega + p / omega, rel=1e-12)


@pytest.mark.parametrize("order", [1, 2])
def test_invariant_series_matches_exact_series_to_second_order(order, p):
    assert series_invariant(HALF_PI, 30.0, p, order) == pytest.approx(
        series_positive(HALF_PI, 30.0, p, order), rel=1e-15)


def test_terms_shrink_for_large_omega(p):
    omega = 10.0 * math.sqrt(abs(p))
    terms = expand_positive(HALF_PI, omega, p, 4).terms
    for n in range(1, 4):
        assert abs(terms[n]) < abs(terms[n - 1])


def test_series_refuses_outside_convergence(p):
    # exact step is still fine on the always-feasible half
    theta = 3 * HALF_PI
    assert not taylor_convergent(theta, 4.0, p)
    with pytest.raises(SeriesDomainError):
        series_positive(theta, 4.0, p)
    with pytest.raises(SeriesDomainError):
        series_negative(theta, 4.0, p)
    assert not invariant_series_convergent(theta, 4.0, p)
    with pytest.raises(SeriesDomainError):
        series_invariant(theta, 4.0, p)
    assert solve_roots(theta, 4.0, p) is not None


@pytest.mark.parametrize("order", [0, 5])
def test_order_is_bounded(order, p):
    with pytest.raises(SeriesDomainError, match="order"):
        series_positive(HALF_PI, 30.0, p, order)


def test_deviation_vanishes_on_axis(p):
    assert one_step_deviation(0.0, 20.0, p) == 0.0
    assert one_step_deviation(math.pi, 20.0, p) == 0.0


def test_deviation_scales_with_fifth_power(p):
    ratio = abs(one_step_deviation(HALF_PI, 30.0, p)) / abs(one_step_deviation(HALF_PI, 60.0, p))
    assert 32.0 * 0.8 <= ratio <= 32.0 * 1.2


def test_deviation_sign_follows_p_cubed(p, n3_pos):
    assert math.copysign(1.0, one_step_deviation(HALF_PI, 100.0, p)) == math.copysign(1.0, p ** 3)
    pos = n3_pos.p_value
    assert one_step_deviation(HALF_PI, 100.0, pos) > 0.0


def test_deviation_refuses_small_omega(p):
    with pytest.raises(SeriesDomainError):
        one_step_deviation(3 * HALF_PI, 4.0, p)


@settings(deadline=None, max_examples=200)
@given(theta=st.floats(0.0, TWO_PI, exclude_max=True),
       omega=st.floats(2.0, 80.0),
       p_value=st.floats(-30.0, 30.0).filter(lambda v: abs(v) > 1e-3))
def test_exact_root_sum(theta, omega, p_value):
    assume(omega * omega > 2.0 * abs(p_value))
    roots = solve_roots(theta, omega, p_value)
    assume(roots is not None)
    ps = p_value * circle_sin(theta)
    assert roots[0] + roots[1] == pytest.approx(omega + ps / omega, rel=1e-12, abs=1e-12)
