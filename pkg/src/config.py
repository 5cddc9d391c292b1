"""
Experiment configuration and process settings

An experiment is a JSON document validated by ExperimentConfig; process-level
settings (output directory, log level, worker count) come from the
environment, with .env support through python-dotenv at bootstrap.
"""

import math
import os
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .dynamics.core_map import make_params, params_from_fraction
from .errors import ConfigError
from .models import Branch, BranchPolicy, MapParams

DELTA_RANGE_MSG = "delta_theta must lie strictly between 0 and pi"


class TwoPiFraction(BaseModel):
    """delta_theta = (p/q) * 2*pi"""
    kind: Literal["two_pi_fraction"]
    p: int
    q: int

    @model_validator(mode='after')
    def _check(self):
        if self.p <= 0 or self.q <= 0 or 2 * self.p >= self.q:
            raise ValueError(DELTA_RANGE_MSG)
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("fraction p/q must be in lowest terms")
        return self


class Radians(BaseModel):
    kind: Literal["radians"]
    value: float

    @field_validator('value')
    @classmethod
    def _check(cls, v: float) -> float:
        if not 0.0 < v < math.pi:
            raise ValueError(DELTA_RANGE_MSG)
        return v


class TwoPiScale(BaseModel):
    """delta_theta = value * 2*pi, for irrational rotations such as sqrt(2)/5"""
    kind: Literal["two_pi_scale"]
    value: float

    @field_validator('value')
    @classmethod
    def _check(cls, v: float) -> float:
        if not 0.0 < v < 0.5:
            raise ValueError(DELTA_RANGE_MSG)
        return v


DeltaThetaSpec = Annotated[Union[TwoPiFraction, Radians, TwoPiScale], Field(discriminator='kind')]


class BranchOverride(BaseModel):
    index: int
    branch: Branch = Branch.NEGATIVE

    @field_validator('index')
    @classmethod
    def _check_index(cls, v: int) -> int:
        if v < 1:
            raise ValueError("branch override index must be at least 1")
        return v


class AngleOverride(BaseModel):
    angle: float
    branch: Branch = Branch.NEGATIVE


class BranchConfig(BaseModel):
    default: Branch = Branch.POSITIVE
    overrides: List[BranchOverride] = Field(default_factory=list)
    angle_overrides: List[AngleOverride] = Field(default_factory=list)

    def to_policy(self) -> BranchPolicy:
        return BranchPolicy(
            default=self.default,
            index_overrides={o.index: o.branch for o in self.overrides},
            angle_overrides={o.angle: o.branch for o in self.angle_overrides},
        )


class ExperimentConfig(BaseModel):
    """One simulation run: map parameters, initial condition and window"""

    delta_theta: DeltaThetaSpec
    g: float = 9.81
    ell: float = 1.0
    p_sign: str = "-"
    # radians, or "half_step" for delta_theta / 2
    theta1: Union[float, Literal["half_step"]] = 0.0
    omega1: float
    steps: int = 1200
    branch: BranchConfig = Field(default_factory=BranchConfig)

    @field_validator('g')
    @classmethod
    def _check_g(cls, v: float) -> float:
        if v <= 0.0:
            raise ValueError("g must be positive")
        return v

    @field_validator('ell')
    @classmethod
    def _check_ell(cls, v: float) -> float:
        if v <= 0.0:
            raise ValueError("ell must be positive")
        return v

    @field_validator('p_sign')
    @classmethod
    def _check_sign(cls, v: str) -> str:
        # accept the unicode minus as well
        v = v.strip().replace("−", "-")
        if v not in ("+", "-"):
            raise ValueError("p_sign must be '+' or '-'")
        return v

    @field_validator('omega1')
    @classmethod
    def _check_omega(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("omega1 must be positive")
        return v

    @field_validator('steps')
    @classmethod
    def _check_steps(cls, v: int) -> int:
        if v < 1:
            raise ValueError("steps must be at least 1")
        return v

    @property
    def sign(self) -> int:
        return 1 if self.p_sign == "+" else -1

    def resolve(self) -> Tuple[MapParams, float, BranchPolicy]:
        """Return (map parameters, theta1 in radians, branch policy)"""
        delta = self.delta_theta
        if isinstance(delta, TwoPiFraction):
            params = params_from_fraction(delta.p, delta.q, self.g, self.ell, self.sign)
        elif isinstance(delta, TwoPiScale):
            params = make_params(2.0 * math.pi * delta.value, self.g, self.ell, self.sign)
        else:
            params = make_params(delta.value, self.g, self.ell, self.sign)
        theta1 = 0.5 * params.delta_theta if self.theta1 == "half_step" else float(self.theta1)
        return params, theta1, self.branch.to_policy()


def _first_message(exc: ValidationError) -> str:
    error = exc.errors()[0]
    cause = (error.get('ctx') or {}).get('error')
    if isinstance(cause, ValueError):
        return str(cause)
    location = ".".join(str(part) for part in error.get('loc', ()))
    return f"{location}: {error['msg']}" if location else error['msg']


def parse_config(text: str) -> ExperimentConfig:
    """Validate a JSON experiment document, raising ConfigError on any problem"""
    try:
        return ExperimentConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(_first_message(e)) from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text)


class Settings(BaseModel):
    """Process-level settings read from ROTORMAP_* environment variables"""

    output_dir: Path = Path("./artifacts")
    log_level: str = "INFO"
    workers: int = 4

    @field_validator('workers')
    @classmethod
    def _check_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v


def load_settings(environ: Optional[dict] = None) -> Settings:
    env = os.environ if environ is None else environ
    values = {}
    if env.get('ROTORMAP_OUTPUT_DIR'):
        values['output_dir'] = env['ROTORMAP_OUTPUT_DIR']
    if env.get('ROTORMAP_LOG_LEVEL'):
        values['log_level'] = env['ROTORMAP_LOG_LEVEL'].upper()
    if env.get('ROTORMAP_WORKERS'):
        values['workers'] = env['ROTORMAP_WORKERS']
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(_first_message(e)) from e
