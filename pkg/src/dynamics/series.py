"""
Series Approximations - Taylor forms of the exact step and of the invariant step

All expansions are in powers of x = P sin(theta) / omega^2 and are truncated
after `order` correction terms (1 to 4).
"""

from typing import Sequence

from ..errors import SeriesDomainError
from ..models import SeriesTerms
from .core_map import circle_sin, solve_roots
from .invariant import invariant_step

MAX_ORDER = 4

# omega' / omega = 1 + 2x - 2x^2 + 6x^3 - 22x^4 + ...
POSITIVE_COEFFS = (2.0, -2.0, 6.0, -22.0)
# omega' / omega = -x + 2x^2 - 6x^3 + 22x^4 + ...
NEGATIVE_COEFFS = (-1.0, 2.0, -6.0, 22.0)
# sqrt(1 + 4x) = 1 + 2x - 2x^2 + 4x^3 - 10x^4 + ...
INVARIANT_COEFFS = (2.0, -2.0, 4.0, -10.0)


def _ratio(theta: float, omega: float, p_value: float) -> float:
    return p_value * circle_sin(theta) / (omega * omega)


def taylor_convergent(theta: float, omega: float, p_value: float) -> bool:
    """True when |6x + x^2| < 1, so the exact-step square root has a convergent expansion"""
    x = _ratio(theta, omega, p_value)
    return abs(6.0 * x + x * x) < 1.0


def invariant_series_convergent(theta: float, omega: float, p_value: float) -> bool:
    """True when |4x| < 1"""
    return abs(4.0 * _ratio(theta, omega, p_value)) < 1.0


def _check_order(order: int):
    if not 1 <= order <= MAX_ORDER:
        raise SeriesDomainError(f"order must be between 1 and {MAX_ORDER}, got {order}")


def _expand(omega: float, x: float, coeffs: Sequence[float], order: int, lead: float) -> SeriesTerms:
    terms = tuple(c * x ** (n + 1) * omega for n, c in enumerate(coeffs[:order]))
    return SeriesTerms(order=order, value=lead + sum(terms), terms=terms)


def expand_positive(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> SeriesTerms:
    """Positive-root expansion with its individual correction terms"""
    _check_order(order)
    if not taylor_convergent(theta, omega, p_value):
        raise SeriesDomainError("|6 P sin/omega^2 + P^2 sin^2/omega^4| must be below 1")
    return _expand(omega, _ratio(theta, omega, p_value), POSITIVE_COEFFS, order, omega)


def expand_negative(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> SeriesTerms:
    _check_order(order)
    if not taylor_convergent(theta, omega, p_value):
        raise SeriesDomainError("|6 P sin/omega^2 + P^2 sin^2/omega^4| must be below 1")
    return _expand(omega, _ratio(theta, omega, p_value), NEGATIVE_COEFFS, order, 0.0)


def expand_invariant(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> SeriesTerms:
    _check_order(order)
    if not invariant_series_convergent(theta, omega, p_value):
        raise SeriesDomainError("|4 P sin/omega^2| must be below 1")
    return _expand(omega, _ratio(theta, omega, p_value), INVARIANT_COEFFS, order, omega)


def series_positive(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> float:
    return expand_positive(theta, omega, p_value, order).value


def series_negative(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> float:
    return expand_negative(theta, omega, p_value, order).value


def series_invariant(theta: float, omega: float, p_value: float, order: int = MAX_ORDER) -> float:
    return expand_invariant(theta, omega, p_value, order).value


def one_step_deviation(theta: float, omega: float, p_value: float) -> float:
    """
    Exact positive-branch step minus the invariant step, both in closed form.

    Leading behaviour is 2 P^3 sin^3 / omega^5. Raises SeriesDomainError
    outside the region where both expansions converge.
    """
    if not taylor_convergent(theta, omega, p_value):
        raise SeriesDomainError("exact-step expansion does not converge here")
    if not invariant_series_convergent(theta, omega, p_value):
        raise SeriesDomainError("invariant-step expansion does not converge here")
    roots = solve_roots(theta, omega, p_value)
    # convergence region lies inside the feasible region
    exact = roots[0]
    return exact - invariant_step(theta, omega, p_value)
