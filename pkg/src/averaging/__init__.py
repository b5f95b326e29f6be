"""Linearised weighted motion averaging and its correntropy-reweighted outer loop."""

from src.averaging.linear import LinearSystem, build_linear_system, solve_min_norm
from src.averaging.solver import (
    IterationRecord,
    SolveReport,
    SolverConfig,
    apply_update,
    assign_weights,
    mcc_motion_averaging,
    plain_ma,
    solve,
    weighted_ma_step,
)

__all__ = [
    "LinearSystem",
    "build_linear_system",
    "solve_min_norm",
    "SolverConfig",
    "IterationRecord",
    "SolveReport",
    "assign_weights",
    "apply_update",
    "weighted_ma_step",
    "solve",
    "mcc_motion_averaging",
    "plain_ma",
]
