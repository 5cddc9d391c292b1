"""
Orbit Analysis - trajectories, periodicity, drift, prediction error and stability

Runs the exact map over a window, then measures how far the trajectory is
from periodic, how well the approximate invariant predicts it, and (for
periodic orbits) the monodromy matrix and its eigenvalues.
"""

import cmath
import logging
import math
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import DomainError, NoReturnError, NotPeriodicError, PredictionUnavailable
from ..models import (Branch, BranchPolicy, InvariantModel, MapParams, OrbitReport,
                      PendulumModel, State, Termination, Trajectory)
from .core_map import angle_at, circle_sin, reduce_angle, solve_roots, step
from .invariant import build_model, omega_pred, pendulum_model, pendulum_omega
from .series import taylor_convergent

logger = logging.getLogger(__name__)

# relative tolerance on omega at every return for an orbit to count as periodic
PERIOD_TOL = 1e-8


class ErrorSummary(NamedTuple):
    max_err_pct: Optional[float]
    index: Optional[int]
    unavailable: int


def simulate(params: MapParams, theta1: float, omega1: float, max_steps: int,
             branch_policy: Optional[BranchPolicy] = None, whole_revolutions: bool = False) -> Trajectory:
    """
    Iterate the exact map from (theta1, omega1).

    Args:
        params: Map parameters
        theta1: Initial angle (reduced to [0, 2*pi))
        omega1: Initial angular velocity, > 0
        max_steps: Number of transitions to attempt
        branch_policy: Root selection, positive branch everywhere by default
        whole_revolutions: On an infeasible stop with a rational step 2*pi p/q,
            cut the trajectory back to its last return index 1 + m q so
            the window holds complete revolutions only

    Returns:
        Trajectory holding every feasible state; stops early (termination
        INFEASIBLE) at the first step without a positive real root
    """
    if omega1 <= 0.0:
        raise DomainError("omega1 must be positive")
    if max_steps < 0:
        raise DomainError("max_steps must not be negative")
    policy = branch_policy or BranchPolicy()
    theta1 = reduce_angle(theta1)

    states = [State(k=1, theta=theta1, omega=omega1)]
    discriminants: List[float] = []
    residuals: List[float] = []
    termination = Termination.WINDOW_EXHAUSTED
    final_disc = None

    current = states[0]
    for _ in range(max_steps):
        branch = policy.branch_for(current.k, current.theta)
        outcome = step(current, params, branch, theta_next=angle_at(theta1, current.k + 1, params))
        discriminants.append(outcome.discriminant)
        residuals.append(outcome.residual)
        if not outcome.feasible:
            termination = Termination.INFEASIBLE
            final_disc = outcome.discriminant
            logger.warning("Run from (%.6g, %.6g) became infeasible after %d states "
                           "(discriminant %.6g, %s branch)", theta1, omega1, len(states),
                           outcome.discriminant, branch.value)
            break
        current = outcome.next
        states.append(current)

    trimmed = 0
    if whole_revolutions and termination is Termination.INFEASIBLE and params.period is not None:
        keep = _last_return(len(states), params.period)
        trimmed = len(states) - keep
        if trimmed:
            logger.info("Dropping %d states past the last complete revolution (k = %d)", trimmed, keep)
            states = states[:keep]
            discriminants = discriminants[:keep]
            residuals = residuals[:keep - 1]

    logger.debug("Simulated %d states, termination=%s", len(states), termination.value)
    return Trajectory(states=states, termination=termination, branch_policy=policy,
                      discriminants=discriminants, residuals=residuals,
                      final_discriminant=final_disc, trimmed_states=trimmed)


def _last_return(length: int, q: int) -> int:
    """Largest 1 + m q not beyond `length`; the whole run when no revolution completed"""
    revolutions = (length - 1) // q
    return 1 + revolutions * q if revolutions else length


def check_assumption(trajectory: Trajectory, params: MapParams) -> Tuple[bool, float]:
    """Return (min omega^2 > |P|, min omega) over the trajectory"""
    if not trajectory.states:
        raise DomainError("trajectory is empty")
    min_omega = min(trajectory.omegas)
    return min_omega * min_omega > abs(params.p_value), min_omega


def return_indices(trajectory: Trajectory, q: int) -> List[int]:
    """Step indices 1 + m q (m >= 1) inside the trajectory"""
    return list(range(1 + q, len(trajectory.states) + 1, q))


def detect_period(trajectory: Trajectory, params: MapParams) -> Optional[int]:
    """
    Return the period q when omega comes back to omega_1 at every return.

    Irrational rotations have no periodic points and give None straight away,
    as does a window too short to see a single return.
    """
    q = params.period
    if q is None:
        return None
    returns = return_indices(trajectory, q)
    if not returns:
        return None
    omega1 = trajectory.first.omega
    for k in returns:
        if abs(trajectory.states[k - 1].omega - omega1) / omega1 > PERIOD_TOL:
            return None
    return q


def drift_pct(trajectory: Trajectory, q: int) -> float:
    """Signed % change of omega from omega_1 at the last return index in the window"""
    returns = return_indices(trajectory, q)
    if not returns:
        raise NoReturnError(f"no return with stride {q} among {len(trajectory)} states")
    omega1 = trajectory.first.omega
    return 100.0 * (trajectory.states[returns[-1] - 1].omega - omega1) / omega1


def _max_signed(errors: List[Tuple[int, float]], unavailable: int) -> ErrorSummary:
    if not errors:
        return ErrorSummary(None, None, unavailable)
    k, err = max(errors, key=lambda item: abs(item[1]))
    return ErrorSummary(err, k, unavailable)


def prediction_errors(trajectory: Trajectory, model: InvariantModel) -> Tuple[List[Tuple[int, float]], int]:
    """Per-state (k, 100 (predicted - exact) / exact), plus the count of unavailable predictions"""
    errors = []
    unavailable = 0
    for state in trajectory.states:
        try:
            predicted = omega_pred(state.theta, model)
        except PredictionUnavailable:
            unavailable += 1
            continue
        errors.append((state.k, 100.0 * (predicted - state.omega) / state.omega))
    return errors, unavailable


def max_prediction_error(trajectory: Trajectory, model: InvariantModel) -> ErrorSummary:
    """Largest-magnitude signed prediction error, keeping its sign"""
    errors, unavailable = prediction_errors(trajectory, model)
    if unavailable:
        logger.warning("Invariant prediction unavailable at %d of %d states", unavailable, len(trajectory))
    return _max_signed(errors, unavailable)


def max_pendulum_error(trajectory: Trajectory, model: PendulumModel) -> ErrorSummary:
    """Same metric as max_prediction_error, against the pendulum-limit omega(theta)"""
    errors = []
    unavailable = 0
    for state in trajectory.states:
        try:
            predicted = pendulum_omega(state.theta, model)
        except PredictionUnavailable:
            unavailable += 1
            continue
        errors.append((state.k, 100.0 * (predicted - state.omega) / state.omega))
    return _max_signed(errors, unavailable)


def trajectory_extrema(trajectory: Trajectory) -> Dict[str, float]:
    """Largest and smallest omega of the run and the angles where they occur"""
    top = max(trajectory.states, key=lambda s: s.omega)
    bottom = min(trajectory.states, key=lambda s: s.omega)
    return {
        'omega_max': top.omega,
        'theta_at_max': top.theta,
        'omega_min': bottom.omega,
        'theta_at_min': bottom.theta,
    }


def step_jacobian(state: State, params: MapParams, branch: Branch = Branch.POSITIVE) -> np.ndarray:
    """
    Jacobian [[1, 0], [d omega'/d theta, d omega'/d omega]] of one step.

    Partials come from implicit differentiation of the step quadratic
    F = omega w^2 - (omega^2 + P sin) w - P sin omega at the selected root w,
    so the same formula serves both branches.
    """
    roots = solve_roots(state.theta, state.omega, params.p_value)
    if roots is None:
        raise DomainError(f"step at k={state.k} is infeasible, no Jacobian")
    w = roots[0] if branch is Branch.POSITIVE else roots[1]
    omega = state.omega
    ps = params.p_value * circle_sin(state.theta)
    dF_dw = 2.0 * omega * w - omega * omega - ps
    if dF_dw == 0.0:
        raise DomainError(f"double root at k={state.k}, Jacobian undefined")
    d_theta = params.p_value * math.cos(state.theta) * (w + omega) / dF_dw
    d_omega = -(w * w - 2.0 * omega * w - ps) / dF_dw
    return np.array([[1.0, 0.0], [d_theta, d_omega]])


def eigenvalues_2x2(matrix: np.ndarray) -> Tuple[complex, complex]:
    """Both eigenvalues of a 2x2 matrix from its trace and determinant"""
    trace = matrix[0, 0] + matrix[1, 1]
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    root = cmath.sqrt(trace * trace - 4.0 * det)
    return (trace + root) / 2.0, (trace - root) / 2.0


def orbit_jacobians(trajectory: Trajectory, params: MapParams, period: int) -> List[np.ndarray]:
    """J_1 .. J_N along the first period of the trajectory"""
    policy = trajectory.branch_policy
    return [step_jacobian(s, params, policy.branch_for(s.k, s.theta))
            for s in trajectory.states[:period]]


def monodromy(trajectory: Trajectory, params: MapParams) -> Tuple[np.ndarray, Tuple[float, float]]:
    """
    Monodromy matrix M = J_N ... J_2 J_1 of a periodic orbit.

    Returns:
        (M, magnitudes of its two eigenvalues, largest first)

    Raises:
        NotPeriodicError: when detect_period does not confirm the orbit
    """
    period = detect_period(trajectory, params)
    if period is None:
        raise NotPeriodicError("monodromy needs a verified periodic orbit")
    product = np.eye(2)
    for jac in orbit_jacobians(trajectory, params, period):
        product = jac @ product
    lam1, lam2 = eigenvalues_2x2(product)
    magnitudes = sorted((abs(lam1), abs(lam2)), reverse=True)
    return product, (magnitudes[0], magnitudes[1])


def analyze(params: MapParams, theta1: float, omega1: float, steps: int,
            branch_policy: Optional[BranchPolicy] = None) -> Tuple[OrbitReport, Trajectory, InvariantModel]:
    """
    Run the full pipeline for one initial condition.

    Args:
        steps: Window length in states (at most steps - 1 transitions). An
            infeasible run with a rational step ends on its last complete
            revolution

    Returns:
        (report, trajectory, invariant model built at the initial condition)
    """
    if steps < 1:
        raise DomainError("steps must be at least 1")
    trajectory = simulate(params, theta1, omega1, steps - 1, branch_policy, whole_revolutions=True)
    model = build_model(trajectory.first.theta, omega1, params)
    assumption_ok, min_omega = check_assumption(trajectory, params)

    period = detect_period(trajectory, params)
    drift = None
    if params.period is not None:
        try:
            drift = drift_pct(trajectory, params.period)
        except NoReturnError:
            drift = None

    mono = None
    eig = None
    if period is not None:
        matrix, eig = monodromy(trajectory, params)
        mono = matrix.tolist()

    errors = max_prediction_error(trajectory, model)
    try:
        pmodel = pendulum_model(trajectory.first.theta, omega1, params.g, params.ell, params.p_sign)
        pendulum_err = max_pendulum_error(trajectory, pmodel).max_err_pct
    except DomainError:
        pendulum_err = None

    convergent = all(taylor_convergent(s.theta, s.omega, params.p_value) for s in trajectory.states)

    report = OrbitReport(
        periodic=period is not None,
        period=period,
        drift_pct=drift,
        max_err_pct=errors.max_err_pct,
        max_err_index=errors.index,
        monodromy=mono,
        eigenvalues=eig,
        steps=len(trajectory),
        completed_steps=trajectory.completed_steps,
        termination=trajectory.termination,
        final_discriminant=trajectory.final_discriminant,
        assumption_satisfied=assumption_ok,
        min_omega=min_omega,
        e_bar=model.e_bar,
        sigma=model.sigma,
        unavailable_predictions=errors.unavailable,
        series_convergent=convergent,
        extrema=trajectory_extrema(trajectory),
        pendulum_max_err_pct=pendulum_err,
        trimmed_states=trajectory.trimmed_states,
    )
    logger.debug("Analyzed run: periodic=%s drift=%s max_err=%s", report.periodic, drift, errors.max_err_pct)
    return report, trajectory, model
