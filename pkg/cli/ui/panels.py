"""Panel components for solver reports, evaluations and experiment tables."""

from __future__ import annotations

import statistics
from collections.abc import Sequence

from rich import box
from rich.console import Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from src.averaging.solver import SolveReport
from src.bench.metrics import EvalResult, RelativeMotionStatistics
from src.bench.trials import TrialResult

PANEL_BOX = box.ROUNDED
SUBTLE_BOX = box.SIMPLE

MAX_VIEWS_SHOWN = 12


def _g(x: float | None) -> str:
    return "-" if x is None else f"{x:.4g}"


def create_report_panel(report: SolveReport, final_error: float) -> Panel:
    """Summary of one solver run and its last few iterations."""
    summary = Table(show_header=False, box=None, padding=(0, 1), expand=True)
    summary.add_column("Metric", style="muted", width=20)
    summary.add_column("Value", style="text")

    style = "converged" if report.converged else "capped"
    summary.add_row("Method", f"[method]{report.mode}[/method]")
    summary.add_row("Termination", f"[{style}]{report.termination}[/{style}]")
    summary.add_row("Iterations", f"[number]{report.iterations_run}[/number]")
    summary.add_row("Final e_M", f"[number]{final_error:.6g}[/number]")
    if report.final_weights:
        low = min(report.final_weights)
        summary.add_row("Min edge weight", f"[number]{low:.3g}[/number]")

    trajectory = Table(show_header=True, header_style="primary.bold", box=SUBTLE_BOX, expand=True)
    trajectory.add_column("k", style="number", justify="right", width=5)
    trajectory.add_column("e_M", justify="right")
    trajectory.add_column("sigma", justify="right")
    trajectory.add_column("update", justify="right")
    trajectory.add_column("objective", justify="right")
    for r in report.records[-8:]:
        trajectory.add_row(
            str(r.iteration), _g(r.residual_error), _g(r.sigma), _g(r.max_update), _g(r.objective)
        )

    return Panel(
        Group(summary, Text(), trajectory),
        title="[panel.title]Motion Averaging[/panel.title]",
        border_style="border",
        box=PANEL_BOX,
        padding=(1, 2),
    )


def create_eval_panel(result: EvalResult) -> Panel:
    table = Table(show_header=True, header_style="primary.bold", box=SUBTLE_BOX, expand=True)
    table.add_column("View", style="number", justify="right", width=6)
    table.add_column("e_R", justify="right")
    table.add_column("e_t", justify="right")
    for k, v in enumerate(result.per_view[:MAX_VIEWS_SHOWN]):
        table.add_row(str(k), _g(v.e_r), _g(v.e_t))
    if len(result.per_view) > MAX_VIEWS_SHOWN:
        table.add_row("...", f"+{len(result.per_view) - MAX_VIEWS_SHOWN} more", "")
    table.add_row("mean", f"[success]{result.e_r:.6g}[/success]", f"[success]{result.e_t:.6g}[/success]")

    return Panel(
        table,
        title="[panel.title]Evaluation[/panel.title]",
        border_style="border",
        box=PANEL_BOX,
        padding=(0, 1),
    )


def create_statistics_panel(stats: RelativeMotionStatistics, n_edges: int, n_outliers: int) -> Panel:
    table = Table(show_header=True, header_style="primary.bold", box=SUBTLE_BOX, expand=True)
    table.add_column("Error", style="muted", width=14)
    table.add_column("Mean", justify="right")
    table.add_column("Median", justify="right")
    table.add_column("RMSE", justify="right")
    table.add_row(
        "rotation", _g(stats.rotation_mean), _g(stats.rotation_median), _g(stats.rotation_rmse)
    )
    table.add_row(
        "translation",
        _g(stats.translation_mean),
        _g(stats.translation_median),
        _g(stats.translation_rmse),
    )
    return Panel(
        table,
        title=f"[panel.title]Relative Motions ({n_edges} edges, {n_outliers} outliers)[/panel.title]",
        border_style="border",
        box=PANEL_BOX,
        padding=(0, 1),
    )


def create_sweep_table(results: Sequence[TrialResult]) -> Table:
    table = Table(
        title="[secondary]Kernel width sweep[/secondary]",
        show_header=True,
        header_style="secondary",
        box=SUBTLE_BOX,
    )
    table.add_column("alpha", style="number", justify="right")
    table.add_column("iterations", justify="right")
    table.add_column("e_R", justify="right")
    table.add_column("e_t", justify="right")
    table.add_column("status")
    for trial in results:
        o = trial.outcome("mcc")
        status = "[converged]converged[/converged]" if o.report.converged else "[capped]capped[/capped]"
        table.add_row(_g(o.alpha), str(o.report.iterations_run), _g(o.result.e_r), _g(o.result.e_t), status)
    return table


def create_compare_table(results: Sequence[TrialResult], methods: Sequence[str]) -> Table:
    """Per-method medians over seeds."""
    table = Table(
        title=f"[secondary]Median over {len(results)} seed(s)[/secondary]",
        show_header=True,
        header_style="secondary",
        box=SUBTLE_BOX,
    )
    table.add_column("method", style="method")
    table.add_column("e_R", justify="right")
    table.add_column("e_t", justify="right")
    table.add_column("iterations", justify="right")
    table.add_column("runtime (s)", justify="right")
    for method in methods:
        outcomes = [t.outcome(method) for t in results]
        table.add_row(
            method,
            _g(statistics.median(o.result.e_r for o in outcomes)),
            _g(statistics.median(o.result.e_t for o in outcomes)),
            _g(statistics.median(o.report.iterations_run for o in outcomes)),
            _g(statistics.median(o.report.runtime_s for o in outcomes)),
        )
    return table
