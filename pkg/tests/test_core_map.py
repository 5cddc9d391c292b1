import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.dynamics.core_map import (always_feasible, angle_at, circle_sin, compute_p, discriminant,
                                   equivalent_initial_condition, make_params, params_from_fraction,
                                   quadratic_residual, reduce_angle, rotate, solve_roots, step, step_back)
from src.dynamics.orbit import simulate
from src.errors import DomainError
from src.models import TWO_PI, Branch, MapParams, State

P_REF = -24.846


def test_compute_p_matches_closed_form():
    dt = TWO_PI / 3
    expected = -9.81 * dt * dt / (2.0 * math.sin(dt))
    assert compute_p(dt, 9.81, 1.0, -1) == pytest.approx(expected, rel=1e-15)
    assert compute_p(dt, 9.81, 1.0, -1) == pytest.approx(P_REF, abs=5e-3)
    assert compute_p(dt, 9.81, 1.0, 1) == pytest.approx(-P_REF, abs=5e-3)


def test_compute_p_small_step_limit():
    assert compute_p(1e-6, 1.0, 1.0, -1) == pytest.approx(-5e-7, abs=1e-12)


@pytest.mark.parametrize("dt", [0.0, -0.1, math.pi, 4.0])
def test_compute_p_rejects_step_outside_open_interval(dt):
    with pytest.raises(DomainError, match="strictly between 0 and pi"):
        compute_p(dt, 9.81, 1.0, -1)


def test_compute_p_rejects_bad_physical_constants():
    with pytest.raises(DomainError, match="g must be positive"):
        compute_p(1.0, 0.0, 1.0, -1)
    with pytest.raises(DomainError, match="ell must be positive"):
        compute_p(1.0, 9.81, -1.0, -1)
    with pytest.raises(DomainError):
        compute_p(1.0, 9.81, 1.0, 0)


def test_params_from_fraction_requires_lowest_terms():
    with pytest.raises(DomainError, match="lowest terms"):
        params_from_fraction(2, 6)
    params = params_from_fraction(3, 7)
    assert params.period == 7
    assert params.delta_theta == pytest.approx(TWO_PI * 3 / 7)


def test_map_params_sign_must_match():
    with pytest.raises(DomainError):
        MapParams(delta_theta=1.0, g=9.81, ell=1.0, p_sign=-1, p_value=3.0)


def test_rotate_examples():
    assert rotate(0.0, TWO_PI / 3) == pytest.approx(TWO_PI / 3)
    assert rotate(2 * TWO_PI / 3, TWO_PI / 3) == pytest.approx(0.0, abs=1e-12)
    theta = 0.1
    for _ in range(9):
        theta = rotate(theta, TWO_PI * 2 / 9)
    assert theta == pytest.approx(0.1, abs=1e-12)
    assert rotate(0.1, TWO_PI * 2 / 9, times=9) == pytest.approx(0.1, abs=1e-12)


def test_reduce_angle_range():
    assert reduce_angle(-0.5) == pytest.approx(TWO_PI - 0.5)
    assert reduce_angle(TWO_PI) == 0.0
    assert 0.0 <= reduce_angle(123.456) < TWO_PI


@pytest.mark.parametrize("p,q", [(1, 3), (2, 9), (3, 7), (4, 21), (1, 120)])
def test_rational_angles_return_exactly(p, q):
    params = params_from_fraction(p, q)
    assert angle_at(0.1, 1 + q, params) == 0.1
    assert angle_at(0.1, 1 + 5 * q, params) == 0.1
    theta = 0.1
    for _ in range(q):
        theta = rotate(theta, params.delta_theta)
    assert abs(math.remainder(theta - 0.1, TWO_PI)) <= 1e-12


def test_circle_sin_is_exactly_zero_on_axis():
    assert circle_sin(0.0) == 0.0
    assert circle_sin(math.pi) == 0.0
    assert circle_sin(TWO_PI * 3 / 6) == 0.0
    assert circle_sin(math.pi / 2) == 1.0


def test_discriminant_examples():
    assert discriminant(3 * math.pi / 2, 4.0, P_REF) > 0.0
    assert discriminant(math.pi / 2, 4.0, P_REF) == pytest.approx(-5.906, abs=1e-2)
    assert discriminant(0.0, 3.0, P_REF) == 1.0
    assert discriminant(math.pi, 3.0, P_REF) == 1.0


def test_solve_roots_at_zero_angle():
    assert solve_roots(0.0, 5.0, P_REF) == (5.0, 0.0)


def test_solve_roots_agrees_with_polynomial_solver():
    # omega^2 must exceed about 144.8 for a real root at theta = pi / 2
    theta, omega, p = math.pi / 2, 20.0, P_REF
    roots = solve_roots(theta, omega, p)
    ps = p * math.sin(theta)
    reference = sorted(np.roots([omega, -(omega * omega + ps), -ps * omega]).real, reverse=True)
    assert roots[0] == pytest.approx(reference[0], rel=1e-9)
    assert roots[1] == pytest.approx(reference[1], rel=1e-9)
    for root in roots:
        assert abs(quadratic_residual(theta, omega, root, p)) <= 1e-9 * omega ** 3


@pytest.mark.parametrize("omega", [4.0, 10.0, 12.0])
def test_solve_roots_infeasible(omega):
    assert solve_roots(math.pi / 2, omega, P_REF) is None


def test_step_keeps_omega_on_axis(n3_neg, n6_neg):
    out = step(State(k=1, theta=0.0, omega=5.0), n3_neg)
    assert out.feasible and out.next.omega == 5.0 and out.next.k == 2
    assert out.next.theta == pytest.approx(TWO_PI / 3)
    out = step(State(k=4, theta=math.pi, omega=8.0), n6_neg)
    assert out.next.omega == 8.0


def test_step_infeasible_carries_discriminant():
    params = make_params(TWO_PI / 3, p_sign=-1)
    out = step(State(k=1, theta=math.pi / 2, omega=4.0), params)
    assert not out.feasible
    assert out.next is None
    assert out.discriminant < 0.0


def test_negative_branch_zero_root_is_infeasible(n3_neg):
    out = step(State(k=1, theta=0.0, omega=5.0), n3_neg, Branch.NEGATIVE)
    assert not out.feasible
    assert out.omega_next == 0.0


def test_step_rejects_non_positive_omega(n3_neg):
    with pytest.raises(DomainError):
        step(State(k=1, theta=0.0, omega=0.0), n3_neg)


def test_mixed_branch_first_revolution(n3_pos):
    trajectory = simulate(n3_pos, 0.0, 4.0, 3)
    assert trajectory.states[1].omega == 4.0
    assert trajectory.states[3].omega == pytest.approx(5.3789, abs=5e-4)


def test_always_feasible_half_planes():
    assert always_feasible(math.pi / 2, 10.0)
    assert not always_feasible(math.pi / 2, -10.0)
    assert always_feasible(3 * math.pi / 2, -10.0)


@settings(deadline=None, max_examples=200)
@given(theta=st.floats(0.0, TWO_PI, exclude_max=True),
       omega=st.floats(1.0, 60.0),
       p=st.floats(-30.0, 30.0).filter(lambda v: abs(v) > 1e-3))
def test_feasible_roots_satisfy_quadratic(theta, omega, p):
    roots = solve_roots(theta, omega, p)
    assume(roots is not None)
    for root in roots:
        assert abs(quadratic_residual(theta, omega, root, p)) <= 1e-9 * omega ** 3


@settings(deadline=None, max_examples=50)
@given(omega=st.floats(0.5, 80.0), p=st.floats(0.1, 30.0))
def test_half_plane_feasibility(omega, p):
    for theta in np.linspace(0.0, math.pi, 181):
        assert discriminant(float(theta), omega, p) >= 1.0
        assert discriminant(float(theta) + math.pi, omega, -p) >= 1.0


@settings(deadline=None, max_examples=100)
@given(omega=st.floats(0.5, 80.0))
def test_axis_angles_fix_omega(omega):
    params = make_params(TWO_PI / 3, p_sign=-1)
    for theta in (0.0, math.pi):
        out = step(State(k=1, theta=theta, omega=omega), params)
        assert out.next.omega == omega


@settings(deadline=None, max_examples=200)
@given(theta=st.floats(0.0, TWO_PI, exclude_max=True),
       omega=st.floats(6.0, 60.0),
       sign=st.sampled_from([-1, 1]))
def test_step_back_inverts_positive_step(theta, omega, sign):
    params = make_params(TWO_PI / 3, p_sign=sign)
    assume(omega * omega > abs(params.p_value))
    start = State(k=3, theta=theta, omega=omega)
    forward = step(start, params)
    assume(forward.feasible)
    back = step_back(forward.next, params)
    assert back.feasible
    assert back.next.k == 3
    assert back.next.omega == pytest.approx(omega, rel=1e-12)
    assert abs(math.remainder(back.next.theta - theta, TWO_PI)) <= 1e-12


def test_step_back_needs_predecessor(n3_neg):
    with pytest.raises(DomainError):
        step_back(State(k=1, theta=0.0, omega=10.0), n3_neg)


def test_equivalent_initial_condition_walks_back(n6_neg):
    trajectory = simulate(n6_neg, 0.1, 30.0, 8)
    recovered = equivalent_initial_condition(trajectory.states[-1], n6_neg)
    assert recovered.k == 1
    assert recovered.omega == pytest.approx(30.0, rel=1e-10)
    assert abs(math.remainder(recovered.theta - 0.1, TWO_PI)) <= 1e-10
