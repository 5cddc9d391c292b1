"""
Approximate Invariant - energy-like quantity E-bar and the pendulum limit

    E-bar = omega^2 / 2 + sigma (g/ell) cos(theta - delta_theta/2)

sigma carries the sign of P, so every prediction below is written with a
single "- sigma (g/ell) cos(...)" convention.
"""

import math

from ..errors import DomainError, PredictionUnavailable
from ..models import InvariantModel, MapParams, PendulumModel
from .core_map import circle_sin


def sigma_for(delta_theta: float, p_sign: int) -> float:
    """Return p_sign * dtheta^2 / (2 sin(dtheta/2) sin(dtheta))"""
    if not 0.0 < delta_theta < math.pi:
        raise DomainError("delta_theta must lie strictly between 0 and pi")
    return p_sign * delta_theta * delta_theta / (
        2.0 * math.sin(0.5 * delta_theta) * math.sin(delta_theta))


def sigma(params: MapParams) -> float:
    return sigma_for(params.delta_theta, params.p_sign)


def e_bar(theta1: float, omega1: float, params: MapParams) -> float:
    """Evaluate E-bar at (theta1, omega1)"""
    if omega1 <= 0.0:
        raise DomainError("omega must be positive")
    return 0.5 * omega1 * omega1 + sigma(params) * (params.g / params.ell) * math.cos(
        theta1 - 0.5 * params.delta_theta)


def build_model(theta1: float, omega1: float, params: MapParams) -> InvariantModel:
    """Fix E-bar from an initial condition"""
    return InvariantModel(sigma=sigma(params), e_bar=e_bar(theta1, omega1, params), params=params)


def prediction_radicand(theta: float, model: InvariantModel) -> float:
    params = model.params
    return 2.0 * (model.e_bar - model.sigma * (params.g / params.ell) * math.cos(
        theta - 0.5 * params.delta_theta))


def omega_pred(theta: float, model: InvariantModel) -> float:
    """
    Angular velocity predicted by holding E-bar constant.

    Raises:
        PredictionUnavailable: when the radicand is negative at theta
    """
    radicand = prediction_radicand(theta, model)
    if radicand < 0.0:
        raise PredictionUnavailable(f"negative radicand {radicand:.6g} at theta={theta:.6g}")
    return math.sqrt(radicand)


def prediction_covers_circle(model: InvariantModel) -> bool:
    """True when E-bar - |sigma| g/ell > 0, i.e. a real prediction exists at every angle"""
    params = model.params
    return model.e_bar - abs(model.sigma) * params.g / params.ell > 0.0


def invariant_step(theta: float, omega: float, p_value: float) -> float:
    """One step that conserves E-bar exactly: omega sqrt(1 + 4 P sin(theta) / omega^2)"""
    radicand = 1.0 + 4.0 * p_value * circle_sin(theta) / (omega * omega)
    if radicand < 0.0:
        raise DomainError(f"invariant step radicand {radicand:.6g} is negative")
    return omega * math.sqrt(radicand)


def pendulum_energy(theta: float, omega: float, g: float, ell: float, sign_choice: int) -> float:
    """Integral of motion omega^2/2 + sign_choice (g/ell) cos(theta)"""
    if omega <= 0.0:
        raise DomainError("omega must be positive")
    return 0.5 * omega * omega + sign_choice * (g / ell) * math.cos(theta)


def pendulum_model(theta1: float, omega1: float, g: float, ell: float, sign_choice: int) -> PendulumModel:
    """Build the pendulum-limit model with E taken from the initial condition"""
    energy = pendulum_energy(theta1, omega1, g, ell, sign_choice)
    if energy <= g / ell:
        raise DomainError(f"pendulum energy {energy:.6g} must exceed g/ell = {g / ell:.6g}")
    return PendulumModel(e=energy, sign_choice=sign_choice, g=g, ell=ell)


def pendulum_omega(theta: float, model: PendulumModel) -> float:
    """omega(theta) = sqrt(2 (E - sign_choice (g/ell) cos(theta)))"""
    radicand = 2.0 * (model.e - model.sign_choice * (model.g / model.ell) * math.cos(theta))
    if radicand < 0.0:
        raise PredictionUnavailable(f"negative pendulum radicand {radicand:.6g} at theta={theta:.6g}")
    return math.sqrt(radicand)
