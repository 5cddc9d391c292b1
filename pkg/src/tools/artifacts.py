"""
Run Artifacts - trajectory CSV and report JSON for a single run
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..dynamics.core_map import discriminant
from ..dynamics.invariant import omega_pred
from ..errors import PredictionUnavailable
from ..models import InvariantModel, MapParams, OrbitReport, Termination, Trajectory

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['k', 'theta', 'omega', 'omega_pred', 'err_pct', 'discriminant', 'feasible']
FLOAT_FORMAT = "%.17g"
ROUND_DIGITS = 4

# report keys mirrored into the 4-decimal "rounded" block
ROUNDED_KEYS = ('max_err_pct', 'drift_pct', 'min_omega', 'e_bar', 'sigma', 'pendulum_max_err_pct')


@dataclass
class RunArtifact:
    trajectory_csv: Path
    report_json: Path
    svg_paths: List[Path] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trajectory_csv': str(self.trajectory_csv),
            'report_json': str(self.report_json),
            'svg_paths': [str(p) for p in self.svg_paths],
        }


def trajectory_frame(trajectory: Trajectory, model: InvariantModel, params: MapParams) -> pd.DataFrame:
    """
    One row per state with the invariant prediction and its signed % error.

    `discriminant` is that of the step leaving the state; `feasible` says
    whether that step produced a valid next state (for the last row of a
    full or revolution-trimmed window, whether it would).
    """
    rows = []
    last = len(trajectory.states) - 1
    for i, state in enumerate(trajectory.states):
        try:
            pred = omega_pred(state.theta, model)
            err = 100.0 * (pred - state.omega) / state.omega
        except PredictionUnavailable:
            pred, err = math.nan, math.nan
        if i < len(trajectory.discriminants):
            disc = trajectory.discriminants[i]
        else:
            disc = discriminant(state.theta, state.omega, params.p_value)
        if i < last:
            feasible = True
        elif trajectory.termination is Termination.INFEASIBLE and not trajectory.trimmed_states:
            feasible = False
        else:
            feasible = disc >= 0.0
        rows.append({
            'k': state.k,
            'theta': state.theta,
            'omega': state.omega,
            'omega_pred': pred,
            'err_pct': err,
            'discriminant': disc,
            'feasible': feasible,
        })
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_frame_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_trajectory_csv(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def _rounded(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return round(value, ROUND_DIGITS)


def build_report(report: OrbitReport, params: MapParams, model: InvariantModel,
                 config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Full-precision report document plus a rounded block for side-by-side reading"""
    body = report.to_dict()
    rounded = {key: _rounded(body.get(key)) for key in ROUNDED_KEYS}
    if report.monodromy is not None:
        rounded['monodromy'] = [[round(v, ROUND_DIGITS) for v in row] for row in report.monodromy]
    if report.eigenvalues is not None:
        rounded['eigenvalue_magnitudes'] = [round(v, ROUND_DIGITS) for v in report.eigenvalues]
    return {
        'params': params.to_dict(),
        'invariant': model.to_dict(),
        'config': config,
        'report': body,
        'rounded': rounded,
    }


def write_report_json(document: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    return path


def load_report_json(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_run(trajectory: Trajectory, report: OrbitReport, model: InvariantModel,
              params: MapParams, out_dir: Union[str, Path], stem: str = "run",
              config: Optional[Dict[str, Any]] = None) -> RunArtifact:
    """Write `<stem>_trajectory.csv` and `<stem>_report.json` under out_dir"""
    out_dir = Path(out_dir)
    csv_path = write_frame_csv(trajectory_frame(trajectory, model, params),
                               out_dir / f"{stem}_trajectory.csv")
    json_path = write_report_json(build_report(report, params, model, config),
                                  out_dir / f"{stem}_report.json")
    logger.info("Wrote %s and %s", csv_path, json_path)
    return RunArtifact(trajectory_csv=csv_path, report_json=json_path)
