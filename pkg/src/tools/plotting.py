"""
Plotting Tools - polar trajectory SVG and cobweb surface data
"""

import io
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..dynamics.core_map import solve_roots  # noqa: E402
from ..dynamics.invariant import omega_pred  # noqa: E402
from ..errors import DomainError, PredictionUnavailable  # noqa: E402
from ..models import TWO_PI, InvariantModel, MapParams, Trajectory  # noqa: E402

logger = logging.getLogger(__name__)

CURVE_SAMPLES = 721
OMITTED_NOTE = "invariant prediction unavailable: curve omitted"

SVG_RC = {
    'svg.hashsalt': 'rotormap',
    'svg.fonttype': 'none',
    'font.family': 'serif',
    'figure.figsize': (6.0, 6.0),
}


def prediction_curve(model: InvariantModel, samples: int = CURVE_SAMPLES) -> Tuple[np.ndarray, np.ndarray]:
    """Sample omega_pred on [0, 2*pi]; angles without a real prediction hold NaN"""
    thetas = np.linspace(0.0, TWO_PI, samples)
    omegas = np.full(samples, np.nan)
    for i, theta in enumerate(thetas):
        try:
            omegas[i] = omega_pred(float(theta), model)
        except PredictionUnavailable:
            continue
    return thetas, omegas


def emit_polar_svg(trajectory: Trajectory, model: Optional[InvariantModel],
                   path: Optional[Union[str, Path]] = None, title: Optional[str] = None) -> str:
    """
    Render (theta_k, omega_k) in polar form as an SVG document.

    Exact points are black, the invariant prediction is a red curve. When
    no angle has a real prediction the curve is left out and the figure
    says so. Output bytes depend only on the inputs.

    Returns:
        The SVG text; also written to `path` when one is given
    """
    if not trajectory.states:
        raise DomainError("cannot plot an empty trajectory")

    with plt.rc_context(SVG_RC):
        fig = plt.figure()
        ax = fig.add_subplot(projection='polar')
        curve_drawn = False
        if model is not None:
            thetas, omegas = prediction_curve(model)
            if np.isfinite(omegas).any():
                line, = ax.plot(thetas, omegas, color='red', linewidth=1.0, label='invariant prediction')
                line.set_gid('invariant-curve')
                curve_drawn = True
        if not curve_drawn:
            fig.text(0.5, 0.02, OMITTED_NOTE, ha='center', fontsize=9)
            logger.info("Polar plot without prediction curve")

        points, = ax.plot(trajectory.thetas, trajectory.omegas, linestyle='none', marker='.',
                          markersize=3, color='black', label='exact map')
        points.set_gid('exact-points')
        ax.set_rlabel_position(22.5)
        if title:
            ax.set_title(title)

        buffer = io.StringIO()
        fig.savefig(buffer, format='svg', metadata={'Date': None})
        plt.close(fig)

    svg = buffer.getvalue()
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg, encoding='utf-8')
    return svg


def default_grids(trajectory: Trajectory, theta_points: int = 73,
                  omega_points: int = 61) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform angle grid over the circle and an omega grid bracketing the run"""
    omegas = trajectory.omegas
    low = 0.5 * min(omegas)
    high = 1.5 * max(omegas)
    return np.linspace(0.0, TWO_PI, theta_points), np.linspace(low, high, omega_points)


def emit_cobweb_data(params: MapParams, trajectory: Trajectory, theta_grid: Sequence[float],
                     omega_grid: Sequence[float]) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Tabulate the step surface and the orbit's cobweb path.

    Returns:
        (surface, path). `surface` has one row per grid cell with the
        positive-branch omega', the identity value and a `defined` flag
        (false where the step has no real root). `path` lists the orbit as
        alternating vertical segments (omega_k to omega_{k+1} at theta_k)
        and horizontal segments (theta_k to theta_{k+1} at omega_{k+1}).
    """
    if len(theta_grid) == 0 or len(omega_grid) == 0:
        raise DomainError("cobweb grids must be nonempty")

    cells = []
    for theta in theta_grid:
        for omega in omega_grid:
            if omega <= 0.0:
                raise DomainError("omega grid must be positive")
            roots = solve_roots(float(theta), float(omega), params.p_value)
            defined = roots is not None and roots[0] > 0.0
            cells.append({
                'theta': float(theta),
                'omega': float(omega),
                'omega_next': roots[0] if defined else math.nan,
                'identity': float(omega),
                'defined': defined,
            })
    surface = pd.DataFrame(cells, columns=['theta', 'omega', 'omega_next', 'identity', 'defined'])

    segments = []
    states = trajectory.states
    for i, (current, following) in enumerate(zip(states, states[1:])):
        segments.append({
            'segment': 2 * i,
            'kind': 'vertical',
            'k': current.k,
            'theta_start': current.theta,
            'omega_start': current.omega,
            'theta_end': current.theta,
            'omega_end': following.omega,
            'length': abs(following.omega - current.omega),
        })
        segments.append({
            'segment': 2 * i + 1,
            'kind': 'horizontal',
            'k': current.k,
            'theta_start': current.theta,
            'omega_start': following.omega,
            'theta_end': following.theta,
            'omega_end': following.omega,
            'length': abs(math.remainder(following.theta - current.theta, TWO_PI)),
        })
    path = pd.DataFrame(segments, columns=['segment', 'kind', 'k', 'theta_start', 'omega_start',
                                           'theta_end', 'omega_end', 'length'])
    logger.debug("Cobweb data: %d surface cells, %d path segments", len(surface), len(path))
    return surface, path
