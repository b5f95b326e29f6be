"""
Experiment drivers: one trial builds a contaminated scene and runs each
requested solver mode on it from the same spanning-tree initialisation.

Trials are independent, so `sweep_alpha` and `run_seeds` can fan them out to
worker processes; results always come back in input order.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from multiprocessing import Pool

from src.averaging.solver import SolveReport, SolverConfig, solve
from src.bench.metrics import (
    EvalResult,
    RelativeMotionStatistics,
    evaluate,
    relative_motion_statistics,
)
from src.bench.scenario import (
    ScenarioSpec,
    generate_ground_truth,
    inject_outliers,
    make_relative_motions,
    perturb_edges,
    perturb_globals,
)
from src.graph.model import GlobalMotionSet, MotionGraph, spanning_tree_init

logger = logging.getLogger(__name__)

METHODS: tuple[str, ...] = ("mcc", "plain")
TABLE_COLUMNS: tuple[str, ...] = ("seed", "method", "alpha", "iterations", "e_R", "e_t", "runtime")


@dataclass(frozen=True, eq=False)
class Scene:
    ground_truth: GlobalMotionSet
    graph: MotionGraph
    outliers: frozenset[int]
    init: GlobalMotionSet

    def statistics(self) -> RelativeMotionStatistics:
        return relative_motion_statistics(self.graph, self.ground_truth)


def build_scene(spec: ScenarioSpec) -> Scene:
    streams = spec.streams()
    gt = generate_ground_truth(spec.n_views, streams["ground_truth"])
    graph = make_relative_motions(gt, spec.edge_density, streams["edges"])
    graph = perturb_edges(graph, spec.rot_noise_deg, spec.trans_noise, streams["noise"])
    graph, outliers = inject_outliers(graph, spec.outlier_fraction, streams["outliers"])
    init = perturb_globals(spanning_tree_init(graph), spec.init_perturbation, streams["init"])
    logger.debug(
        "scene seed=%d: %d views, %d edges, %d outliers",
        spec.seed,
        spec.n_views,
        graph.n_edges,
        len(outliers),
    )
    return Scene(ground_truth=gt, graph=graph, outliers=outliers, init=init)


@dataclass(frozen=True, eq=False)
class MethodOutcome:
    method: str
    alpha: float | None
    result: EvalResult
    report: SolveReport
    estimate: GlobalMotionSet


@dataclass(frozen=True, eq=False)
class TrialResult:
    seed: int
    outcomes: tuple[MethodOutcome, ...]
    outliers: frozenset[int]

    def outcome(self, method: str) -> MethodOutcome:
        for o in self.outcomes:
            if o.method == method:
                return o
        raise KeyError(method)


def run_trial(
    spec: ScenarioSpec, cfg: SolverConfig | None = None, methods: Sequence[str] = METHODS
) -> TrialResult:
    cfg = cfg or SolverConfig()
    scene = build_scene(spec)
    outcomes = []
    for method in methods:
        run_cfg = replace(cfg, mode=method)
        estimate, report = solve(scene.graph, scene.init, run_cfg)
        outcomes.append(
            MethodOutcome(
                method=method,
                alpha=run_cfg.alpha if method == "mcc" else None,
                result=evaluate(estimate, scene.ground_truth),
                report=report,
                estimate=estimate,
            )
        )
    return TrialResult(seed=spec.seed, outcomes=tuple(outcomes), outliers=scene.outliers)


def _run_mcc(spec: ScenarioSpec, cfg: SolverConfig) -> TrialResult:
    return run_trial(spec, cfg, methods=("mcc",))


def _map(func, jobs: list[tuple], workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [func(*job) for job in jobs]
    with Pool(processes=min(workers, len(jobs))) as pool:
        return pool.starmap(func, jobs)


def sweep_alpha(
    spec: ScenarioSpec,
    alphas: Iterable[float],
    cfg: SolverConfig | None = None,
    *,
    workers: int = 1,
) -> list[TrialResult]:
    """One MCC trial per alpha on the same scene (same seed)."""
    cfg = cfg or SolverConfig()
    alphas = [float(a) for a in alphas]
    for a in alphas:
        if not a > 0:
            raise ValueError(f"alpha must be positive, got {a}")
    return _map(_run_mcc, [(spec, replace(cfg, alpha=a)) for a in alphas], workers)


def run_seeds(
    spec: ScenarioSpec,
    cfg: SolverConfig | None,
    seeds: Iterable[int],
    *,
    methods: Sequence[str] = METHODS,
    workers: int = 1,
) -> list[TrialResult]:
    """The same scenario shape under several seeds, each solved by every method."""
    cfg = cfg or SolverConfig()
    jobs = [(replace(spec, seed=int(s)), cfg, tuple(methods)) for s in seeds]
    return _map(run_trial, jobs, workers)


def table_rows(results: Iterable[TrialResult], *, timing: bool = False) -> list[list[str]]:
    rows = []
    for trial in results:
        for o in trial.outcomes:
            rows.append(
                [
                    str(trial.seed),
                    o.method,
                    repr(o.alpha) if o.alpha is not None else "",
                    str(o.report.iterations_run),
                    repr(o.result.e_r),
                    repr(o.result.e_t),
                    repr(o.report.runtime_s) if timing else "",
                ]
            )
    return rows


def write_table(rows: Iterable[Sequence[str]], *, comments: Sequence[str] = ()) -> str:
    """Comma-separated table with a header row; `comments` become leading '# ' lines."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    writer.writerows(rows)
    return buf.getvalue()
