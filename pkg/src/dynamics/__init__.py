"""
Dynamics package - the exact rotor map and everything computed from it
"""

from .core_map import (
    always_feasible,
    angle_at,
    circle_sin,
    compute_p,
    discriminant,
    equivalent_initial_condition,
    make_params,
    params_from_fraction,
    quadratic_residual,
    reduce_angle,
    rotate,
    solve_roots,
    step,
    step_back,
)
from .invariant import (
    build_model,
    e_bar,
    invariant_step,
    omega_pred,
    pendulum_energy,
    pendulum_model,
    pendulum_omega,
    prediction_covers_circle,
    sigma,
    sigma_for,
)
from .orbit import (
    analyze,
    check_assumption,
    detect_period,
    drift_pct,
    eigenvalues_2x2,
    max_pendulum_error,
    max_prediction_error,
    monodromy,
    orbit_jacobians,
    prediction_errors,
    simulate,
    step_jacobian,
    trajectory_extrema,
)
from .series import (
    expand_invariant,
    expand_negative,
    expand_positive,
    invariant_series_convergent,
    one_step_deviation,
    series_invariant,
    series_negative,
    series_positive,
    taylor_convergent,
)

__all__ = [
    'always_feasible', 'angle_at', 'circle_sin', 'compute_p', 'discriminant',
    'equivalent_initial_condition', 'make_params', 'params_from_fraction',
    'quadratic_residual', 'reduce_angle', 'rotate', 'solve_roots', 'step', 'step_back',
    'build_model', 'e_bar', 'invariant_step', 'omega_pred', 'pendulum_energy',
    'pendulum_model', 'pendulum_omega', 'prediction_covers_circle', 'sigma', 'sigma_for',
    'analyze', 'check_assumption', 'detect_period', 'drift_pct', 'eigenvalues_2x2',
    'max_pendulum_error', 'max_prediction_error', 'monodromy', 'orbit_jacobians',
    'prediction_errors', 'simulate', 'step_jacobian', 'trajectory_extrema',
    'expand_invariant', 'expand_negative', 'expand_positive', 'invariant_series_convergent',
    'one_step_deviation', 'series_invariant', 'series_negative', 'series_positive',
    'taylor_convergent',
]
