"""
Core Map - one exact step of the coupled rotation / angular-velocity map

    theta' = theta + delta_theta                      (mod 2*pi)
    omega' - omega = P sin(theta) * (1/omega + 1/omega')

The second equation is a quadratic in omega'. Both roots are available; the
positive square-root branch is the one used for simulation.
"""

import math
from fractions import Fraction
from typing import Optional, Tuple

from ..errors import DomainError
from ..models import TWO_PI, Branch, MapParams, State, StepOutcome

# reduced angles this close below 2*pi wrap to 0
ANGLE_SNAP = 1e-12

# angles this close to a multiple of pi have sin taken as exactly 0
SIN_ZERO_SNAP = 1e-12


def compute_p(delta_theta: float, g: float, ell: float, p_sign: int) -> float:
    """
    Return the coupling parameter P in s^-2.

    Args:
        delta_theta: Rotation step in radians, strictly inside (0, pi)
        g: Gravitational acceleration (m/s^2)
        ell: Length (m)
        p_sign: +1 or -1

    Returns:
        p_sign * g * delta_theta^2 / (2 * ell * sin(delta_theta))
    """
    if not 0.0 < delta_theta < math.pi:
        raise DomainError("delta_theta must lie strictly between 0 and pi")
    if g <= 0.0:
        raise DomainError("g must be positive")
    if ell <= 0.0:
        raise DomainError("ell must be positive")
    if p_sign not in (1, -1):
        raise DomainError("p_sign must be +1 or -1")
    return p_sign * g * delta_theta * delta_theta / (2.0 * ell * math.sin(delta_theta))


def make_params(delta_theta: float, g: float = 9.81, ell: float = 1.0, p_sign: int = -1,
                fraction: Optional[Fraction] = None) -> MapParams:
    """Build validated MapParams with P derived from the physical constants"""
    p_value = compute_p(delta_theta, g, ell, p_sign)
    return MapParams(delta_theta=delta_theta, g=g, ell=ell, p_sign=p_sign,
                     p_value=p_value, fraction=fraction)


def params_from_fraction(p: int, q: int, g: float = 9.81, ell: float = 1.0,
                         p_sign: int = -1) -> MapParams:
    """Build MapParams for the rational rotation delta_theta = (p/q) * 2*pi"""
    if p <= 0 or q <= 0:
        raise DomainError("fraction p/q needs positive integers")
    if math.gcd(p, q) != 1:
        raise DomainError("fraction p/q must be in lowest terms")
    return make_params(TWO_PI * p / q, g, ell, p_sign, fraction=Fraction(p, q))


def reduce_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)"""
    reduced = theta % TWO_PI
    if TWO_PI - reduced < ANGLE_SNAP:
        return 0.0
    return reduced


def circle_sin(theta: float) -> float:
    """sin(theta), exactly 0 at (numerical) multiples of pi"""
    if abs(math.remainder(theta, math.pi)) <= SIN_ZERO_SNAP:
        return 0.0
    return math.sin(theta)


def rotate(theta: float, delta_theta: float, times: int = 1) -> float:
    """Advance theta by `times` rotation steps and reduce to [0, 2*pi)"""
    return reduce_angle(theta + times * delta_theta)


def angle_at(theta1: float, k: int, params: MapParams) -> float:
    """
    Return theta_k of the orbit starting at theta1 (k is 1-based).

    Computed from the step count rather than by repeated addition. For a
    rational rotation the offset is an exact multiple of 2*pi/q, so theta
    returns to theta1 bit-exactly every q steps.
    """
    if params.fraction is not None:
        p, q = params.fraction.numerator, params.fraction.denominator
        offset = TWO_PI * (((k - 1) * p) % q) / q
        return reduce_angle(theta1 + offset)
    return reduce_angle(theta1 + math.fmod((k - 1) * params.delta_theta, TWO_PI))


def discriminant(theta: float, omega: float, p_value: float) -> float:
    """Radicand 1 + 6 P sin/omega^2 + P^2 sin^2/omega^4; negative means no real step"""
    x = p_value * circle_sin(theta) / (omega * omega)
    return 1.0 + 6.0 * x + x * x


def always_feasible(theta: float, p_value: float) -> bool:
    """True on the half circle where P sin(theta) >= 0 and any omega gives a real step"""
    return p_value * circle_sin(theta) >= 0.0


def quadratic_residual(theta: float, omega: float, omega_next: float, p_value: float) -> float:
    """Value of omega*w^2 - (omega^2 + P sin)*w - P sin*omega at w = omega_next"""
    ps = p_value * circle_sin(theta)
    return omega * omega_next * omega_next - (omega * omega + ps) * omega_next - ps * omega


def solve_roots(theta: float, omega: float, p_value: float) -> Optional[Tuple[float, float]]:
    """
    Solve the step quadratic for omega'.

    Args:
        theta: Current angle
        omega: Current angular velocity, > 0
        p_value: Coupling parameter P

    Returns:
        (positive-branch root, negative-branch root), or None when the
        discriminant is negative. The larger-magnitude root comes from the
        closed form and the other from the product of roots, -P sin(theta),
        so neither suffers cancellation.
    """
    if omega <= 0.0:
        raise DomainError("omega must be positive")
    disc = discriminant(theta, omega, p_value)
    if disc < 0.0:
        return None
    ps = p_value * circle_sin(theta)
    half_linear = 0.5 * omega + ps / (2.0 * omega)
    half_root = 0.5 * omega * math.sqrt(disc)
    if half_linear >= 0.0:
        positive = half_linear + half_root
        negative = -ps / positive
    else:
        negative = half_linear - half_root
        positive = -ps / negative
    # -0.0 from the product form would print oddly
    return positive + 0.0, negative + 0.0


def _advance(state: State, p_value: float, branch: Branch, theta_next: float, k_next: int) -> StepOutcome:
    disc = discriminant(state.theta, state.omega, p_value)
    roots = solve_roots(state.theta, state.omega, p_value)
    if roots is None:
        return StepOutcome(next=None, discriminant=disc, residual=math.nan, branch=branch)

    omega_next = roots[0] if branch is Branch.POSITIVE else roots[1]
    residual = quadratic_residual(state.theta, state.omega, omega_next, p_value)
    if not math.isfinite(omega_next) or omega_next <= 0.0:
        return StepOutcome(next=None, discriminant=disc, residual=residual,
                           branch=branch, omega_next=omega_next)
    return StepOutcome(next=State(k=k_next, theta=theta_next, omega=omega_next),
                       discriminant=disc, residual=residual, branch=branch,
                       omega_next=omega_next)


def step(state: State, params: MapParams, branch: Branch = Branch.POSITIVE,
         theta_next: Optional[float] = None) -> StepOutcome:
    """
    Advance one step of the map.

    Args:
        state: Current state, omega > 0
        params: Map parameters
        branch: Which quadratic root becomes omega'
        theta_next: Precomputed next angle (the simulator passes the
            drift-free value); defaults to rotate(state.theta)

    Returns:
        StepOutcome; infeasible (next is None) when the discriminant is
        negative or the selected root is not a positive finite number
    """
    if state.omega <= 0.0:
        raise DomainError("omega must be positive")
    if theta_next is None:
        theta_next = rotate(state.theta, params.delta_theta)
    return _advance(state, params.p_value, branch, theta_next, state.k + 1)


def step_back(state: State, params: MapParams, branch: Branch = Branch.POSITIVE) -> StepOutcome:
    """
    Recover the previous state from the current one.

    The step relation is symmetric in (omega_k, omega_{k+1}) once P changes
    sign, so stepping back is a forward solve at theta_{k-1} with -P.
    """
    if state.k <= 1:
        raise DomainError("cannot step back from k = 1")
    if state.omega <= 0.0:
        raise DomainError("omega must be positive")
    theta_prev = rotate(state.theta, -params.delta_theta)
    at_prev = State(k=state.k, theta=theta_prev, omega=state.omega)
    return _advance(at_prev, -params.p_value, branch, theta_prev, state.k - 1)


def equivalent_initial_condition(state: State, params: MapParams) -> State:
    """Walk a state back to k = 1 along positive backward steps"""
    current = state
    while current.k > 1:
        outcome = step_back(current, params)
        if not outcome.feasible:
            raise DomainError(f"backward step from k={current.k} is infeasible "
                              f"(discriminant {outcome.discriminant:.6g})")
        current = outcome.next
    return current
