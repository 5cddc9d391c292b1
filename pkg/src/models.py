"""
Domain models for the rotor map toolkit

Value types shared by the dynamics modules, the artifact writers and the CLI.
All of them are immutable once built.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Dict, Any, List, Tuple, Mapping

from .errors import DomainError

TWO_PI = 2.0 * math.pi

# Angles closer than this on the circle are treated as the same point
ANGLE_MATCH_TOL = 1e-9


class Branch(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Termination(Enum):
    WINDOW_EXHAUSTED = "window_exhausted"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class MapParams:
    """Full parameterization of the map; build it with core_map.make_params"""

    delta_theta: float
    g: float
    ell: float
    p_sign: int
    p_value: float
    # delta_theta / (2*pi) when the rotation is known to be rational
    fraction: Optional[Fraction] = None

    def __post_init__(self):
        if not 0.0 < self.delta_theta < math.pi:
            raise DomainError("delta_theta must lie strictly between 0 and pi")
        if self.p_sign not in (1, -1):
            raise DomainError("p_sign must be +1 or -1")
        if not math.isfinite(self.p_value) or self.p_value == 0.0:
            raise DomainError("p_value must be finite and nonzero")
        if math.copysign(1.0, self.p_value) != self.p_sign:
            raise DomainError("sign of p_value disagrees with p_sign")

    @property
    def period(self) -> Optional[int]:
        """Return stride q of a rational rotation, None when irrational"""
        return self.fraction.denominator if self.fraction is not None else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta_theta': self.delta_theta,
            'g': self.g,
            'ell': self.ell,
            'p_sign': self.p_sign,
            'p_value': self.p_value,
            'fraction': str(self.fraction) if self.fraction is not None else None,
        }


@dataclass(frozen=True)
class State:
    """One point (k, theta, omega) of a trajectory, k is 1-based"""

    k: int
    theta: float
    omega: float

    def to_dict(self) -> Dict[str, Any]:
        return {'k': self.k, 'theta': self.theta, 'omega': self.omega}


@dataclass(frozen=True)
class StepOutcome:
    """Result of one map step; next is None when the step is infeasible"""

    next: Optional[State]
    discriminant: float
    residual: float
    branch: Branch
    omega_next: float = math.nan

    @property
    def feasible(self) -> bool:
        return self.next is not None


@dataclass(frozen=True)
class BranchPolicy:
    """
    Which quadratic root to take at each step.

    index_overrides keys are step indices k (the state the step starts from);
    angle_overrides keys are angles at which the branch applies on every
    revolution.
    """

    default: Branch = Branch.POSITIVE
    index_overrides: Mapping[int, Branch] = field(default_factory=dict)
    angle_overrides: Mapping[float, Branch] = field(default_factory=dict)

    def branch_for(self, k: int, theta: float) -> Branch:
        if k in self.index_overrides:
            return self.index_overrides[k]
        for angle, branch in self.angle_overrides.items():
            gap = abs(math.remainder(theta - angle, TWO_PI))
            if gap <= ANGLE_MATCH_TOL:
                return branch
        return self.default

    def to_dict(self) -> Dict[str, Any]:
        return {
            'default': self.default.value,
            'index_overrides': {str(k): b.value for k, b in sorted(self.index_overrides.items())},
            'angle_overrides': {repr(a): b.value for a, b in sorted(self.angle_overrides.items())},
        }


@dataclass(frozen=True)
class Trajectory:
    """Ordered feasible states of one run plus how and why it stopped"""

    states: List[State]
    termination: Termination
    branch_policy: BranchPolicy
    # discriminant and quadratic residual of every attempted transition
    discriminants: List[float] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    final_discriminant: Optional[float] = None
    # feasible states dropped after the last complete revolution
    trimmed_states: int = 0

    @property
    def completed_steps(self) -> int:
        return len(self.states) - 1

    @property
    def first(self) -> State:
        return self.states[0]

    @property
    def thetas(self) -> List[float]:
        return [s.theta for s in self.states]

    @property
    def omegas(self) -> List[float]:
        return [s.omega for s in self.states]

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class SeriesTerms:
    """Truncated Taylor expansion: the retained correction terms and their sum"""

    order: int
    value: float
    terms: Tuple[float, ...]


@dataclass(frozen=True)
class InvariantModel:
    """Approximate invariant E-bar with its coefficient sigma"""

    sigma: float
    e_bar: float
    params: MapParams

    def to_dict(self) -> Dict[str, Any]:
        return {'sigma': self.sigma, 'e_bar': self.e_bar}


@dataclass(frozen=True)
class PendulumModel:
    """Integral of motion of the continuous pendulum limit"""

    e: float
    sign_choice: int
    g: float
    ell: float


@dataclass(frozen=True)
class OrbitReport:
    """Everything the analysis pipeline concludes about one run"""

    periodic: bool
    period: Optional[int]
    drift_pct: Optional[float]
    max_err_pct: Optional[float]
    max_err_index: Optional[int]
    monodromy: Optional[List[List[float]]]
    eigenvalues: Optional[Tuple[float, float]]
    steps: int
    completed_steps: int
    termination: Termination
    final_discriminant: Optional[float]
    assumption_satisfied: bool
    min_omega: float
    e_bar: float
    sigma: float
    unavailable_predictions: int = 0
    series_convergent: bool = False
    extrema: Dict[str, float] = field(default_factory=dict)
    pendulum_max_err_pct: Optional[float] = None
    trimmed_states: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'periodic': self.periodic,
            'period': self.period,
            'drift_pct': self.drift_pct,
            'max_err_pct': self.max_err_pct,
            'max_err_index': self.max_err_index,
            'monodromy': self.monodromy,
            'eigenvalue_magnitudes': list(self.eigenvalues) if self.eigenvalues is not None else None,
            'steps': self.steps,
            'completed_steps': self.completed_steps,
            'termination': self.termination.value,
            'final_discriminant': self.final_discriminant,
            'assumption_satisfied': self.assumption_satisfied,
            'min_omega': self.min_omega,
            'e_bar': self.e_bar,
            'sigma': self.sigma,
            'unavailable_predictions': self.unavailable_predictions,
            'series_convergent': self.series_convergent,
            'extrema': dict(self.extrema),
            'pendulum_max_err_pct': self.pendulum_max_err_pct,
            'trimmed_states': self.trimmed_states,
        }
