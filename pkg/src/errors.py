"""
Exception hierarchy for the rotor map toolkit

Infeasible steps are data (see StepOutcome), not exceptions.
"""


class RotorMapError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(RotorMapError, ValueError):
    """An argument lies outside the domain where a formula is defined"""


class SeriesDomainError(DomainError):
    """A Taylor expansion was requested outside its convergence region"""


class PredictionUnavailable(DomainError):
    """The invariant (or pendulum) prediction has a negative radicand"""


class NotPeriodicError(RotorMapError):
    """An operation that needs a verified periodic orbit got something else"""


class NoReturnError(RotorMapError):
    """No full return of the angle to theta_1 happened inside the window"""


class ConfigError(RotorMapError, ValueError):
    """Experiment configuration failed validation"""
