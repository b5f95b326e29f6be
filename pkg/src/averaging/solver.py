"""
Robust motion averaging under the maximum correntropy criterion.

Each outer iteration measures the mean edge residual e_k of the current
globals, sets the kernel width sigma_k = alpha * e_k, assigns every edge the
weight G_sigma_k(residual) and takes one weighted linearised averaging step.
`plain` mode keeps every weight at 1 and `fixed_weights` uses the weights
carried on the edges (or supplied in the config) unchanged.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from src.averaging.linear import build_linear_system, solve_min_norm
from src.core.config import settings
from src.core.errors import Disconnected, EmptyGraph, NonFiniteError
from src.graph.model import (
    GlobalMotionSet,
    MotionGraph,
    check_lengths,
    connected_components,
    edge_residuals,
    is_connected,
)
from src.lie.kernel import KernelWidth, correntropy_loss, gaussian_kernel
from src.lie.se3 import Twist, compose, exp_twist

logger = logging.getLogger(__name__)

Mode = Literal["mcc", "plain", "fixed_weights"]
Gauge = Literal["discard", "anchor"]
Termination = Literal["converged", "max_iterations"]

MODES: tuple[str, ...] = ("mcc", "plain", "fixed_weights")
GAUGES: tuple[str, ...] = ("discard", "anchor")


@dataclass(frozen=True)
class SolverConfig:
    alpha: float = field(default_factory=lambda: settings.alpha)
    max_iterations: int = field(default_factory=lambda: settings.max_iterations)
    change_tolerance: float = field(default_factory=lambda: settings.change_tolerance)
    sigma_floor: float = field(default_factory=lambda: settings.sigma_floor)
    mode: Mode = field(default_factory=lambda: settings.mode)
    gauge: Gauge = field(default_factory=lambda: settings.gauge)
    # Overrides the edge weights in fixed_weights mode.
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if not self.change_tolerance > 0:
            raise ValueError(f"change_tolerance must be positive, got {self.change_tolerance}")
        if not self.sigma_floor > 0:
            raise ValueError(f"sigma_floor must be positive, got {self.sigma_floor}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if self.gauge not in GAUGES:
            raise ValueError(f"gauge must be one of {', '.join(GAUGES)}, got {self.gauge!r}")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    residual_error: float
    sigma: float | None
    max_update: float
    objective: float
    weights: tuple[float, ...]


@dataclass
class SolveReport:
    mode: str
    records: list[IterationRecord] = field(default_factory=list)
    final_weights: tuple[float, ...] = ()
    termination: str = "max_iterations"
    runtime_s: float = 0.0

    @property
    def iterations_run(self) -> int:
        return len(self.records)

    @property
    def converged(self) -> bool:
        return self.termination == "converged"

    @property
    def residual_errors(self) -> list[float]:
        return [r.residual_error for r in self.records]


def assign_weights(
    g: MotionGraph, globals_: GlobalMotionSet, sigma: KernelWidth | float
) -> tuple[MotionGraph, np.ndarray]:
    """
    Correntropy weights w_h = G_sigma(||M_ij - M_i^-1 M_j||_F).

    Returns the graph carrying the new weights and the weights themselves.
    """
    w = np.atleast_1d(gaussian_kernel(edge_residuals(g, globals_), sigma))
    weighted = g.with_weights(w)
    return weighted, weighted.weights


def apply_update(globals_: GlobalMotionSet, solution: np.ndarray) -> GlobalMotionSet:
    """
    Correct views 1..N-1 by M_i <- exp(dv_i) M_i; view 0 is passed through untouched.
    """
    solution = np.asarray(solution, dtype=np.float64)
    if solution.shape != (len(globals_), 6):
        raise ValueError(f"expected a ({len(globals_)}, 6) solution, got {solution.shape}")
    motions = [globals_[0]]
    for k in range(1, len(globals_)):
        motions.append(compose(exp_twist(Twist.from_vector(solution[k])), globals_[k]))
    return GlobalMotionSet(tuple(motions))


def weighted_ma_step(
    g: MotionGraph,
    globals_: GlobalMotionSet,
    weights: np.ndarray | None = None,
    *,
    gauge: Gauge = "discard",
) -> tuple[GlobalMotionSet, float]:
    """One linearised weighted averaging step; returns new globals and max |dv| over views >= 1."""
    system = build_linear_system(g, globals_, weights)
    solution = solve_min_norm(system)
    if gauge == "anchor":
        solution = solution - solution[0]
    magnitude = float(np.max(np.abs(solution[1:]))) if len(globals_) > 1 else 0.0
    return apply_update(globals_, solution), magnitude


def _fixed_weights(g: MotionGraph, cfg: SolverConfig) -> np.ndarray:
    if cfg.weights is None:
        return g.weights
    if len(cfg.weights) != g.n_edges:
        raise ValueError(f"expected {g.n_edges} weights, got {len(cfg.weights)}")
    return g.with_weights(cfg.weights).weights


def solve(
    g: MotionGraph, init: GlobalMotionSet, cfg: SolverConfig | None = None
) -> tuple[GlobalMotionSet, SolveReport]:
    """Run the outer iteration in the mode named by `cfg.mode`."""
    cfg = cfg or SolverConfig()
    check_lengths(g, init)
    if g.n_edges == 0:
        raise EmptyGraph("cannot average a graph without edges")
    if not is_connected(g):
        raise Disconnected(connected_components(g))

    report = SolveReport(mode=cfg.mode)
    fixed = _fixed_weights(g, cfg) if cfg.mode == "fixed_weights" else None
    current = init
    started = time.perf_counter()

    for k in range(1, cfg.max_iterations + 1):
        residuals = edge_residuals(g, current)
        error = math.fsum(residuals.tolist()) / g.n_edges
        if not math.isfinite(error):
            report.runtime_s = time.perf_counter() - started
            raise NonFiniteError(k, report)

        sigma: float | None = None
        if cfg.mode == "mcc":
            width = KernelWidth.adaptive(cfg.alpha, error, cfg.sigma_floor)
            sigma = width.sigma
            _, weights = assign_weights(g, current, width)
            objective = correntropy_loss(residuals, width)
        elif cfg.mode == "plain":
            weights = np.ones(g.n_edges)
            objective = math.fsum(np.square(residuals).tolist())
        else:
            weights = fixed
            objective = math.fsum((weights * np.square(residuals)).tolist())

        updated, magnitude = weighted_ma_step(g, current, weights, gauge=cfg.gauge)
        report.records.append(
            IterationRecord(
                iteration=k,
                residual_error=error,
                sigma=sigma,
                max_update=magnitude,
                objective=objective,
                weights=tuple(float(w) for w in weights),
            )
        )
        report.final_weights = report.records[-1].weights
        logger.debug(
            "iteration %d: e_M=%.6g sigma=%s update=%.3g", k, error, sigma, magnitude
        )

        if not (math.isfinite(magnitude) and updated.is_finite()):
            report.runtime_s = time.perf_counter() - started
            raise NonFiniteError(k, report)
        current = updated

        if magnitude < cfg.change_tolerance:
            report.termination = "converged"
            break

    report.runtime_s = time.perf_counter() - started
    if report.converged:
        logger.info(
            "%s averaging converged after %d iteration(s)", cfg.mode, report.iterations_run
        )
    else:
        logger.warning(
            "%s averaging stopped at the iteration cap (%d) without converging",
            cfg.mode,
            cfg.max_iterations,
        )
    return current, report


def mcc_motion_averaging(
    g: MotionGraph, init: GlobalMotionSet, cfg: SolverConfig | None = None
) -> tuple[GlobalMotionSet, SolveReport]:
    return solve(g, init, replace(cfg or SolverConfig(), mode="mcc"))


def plain_ma(
    g: MotionGraph, init: GlobalMotionSet, cfg: SolverConfig | None = None
) -> tuple[GlobalMotionSet, SolveReport]:
    return solve(g, init, replace(cfg or SolverConfig(), mode="plain"))
