"""
Tools package for artifacts, plots and reference-table reproduction
"""

from .artifacts import (
    RunArtifact,
    build_report,
    load_report_json,
    read_trajectory_csv,
    trajectory_frame,
    write_frame_csv,
    write_report_json,
    write_run,
)
from .plotting import default_grids, emit_cobweb_data, emit_polar_svg, prediction_curve
from .tables import REFERENCE_ROWS, Cell, TableRow, evaluate_row, find_row, reproduce_tables, row_metrics

__all__ = [
    'RunArtifact',
    'build_report',
    'load_report_json',
    'read_trajectory_csv',
    'trajectory_frame',
    'write_frame_csv',
    'write_report_json',
    'write_run',
    'default_grids',
    'emit_cobweb_data',
    'emit_polar_svg',
    'prediction_curve',
    'REFERENCE_ROWS',
    'Cell',
    'TableRow',
    'evaluate_row',
    'find_row',
    'reproduce_tables',
    'row_metrics',
]
