"""Sweep command - kernel width sensitivity on one scene."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from cli.commands.base import (
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    BaseCommand,
    add_scenario_arguments,
    add_solver_arguments,
    parse_float_list,
    scenario_spec,
    solver_config,
)
from cli.core.files import atomic_write
from cli.ui.console import console, print_warning
from cli.ui.panels import create_sweep_table
from src.bench.trials import sweep_alpha, table_rows, write_table

DEFAULT_ALPHAS = "0.4,0.7,1.0,1.5,2.0"


class SweepCommand(BaseCommand):
    name = "sweep"
    description = "Run MCC averaging on one scene for several kernel width multipliers"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--alphas", default=DEFAULT_ALPHAS, help="comma-separated kernel width multipliers"
        )
        parser.add_argument("--out", type=Path, help="table file (default: standard output)")
        parser.add_argument(
            "--init-perturbation",
            type=float,
            default=0.0,
            help="norm of the random twist added to each initial view",
        )
        parser.add_argument("--workers", type=int, default=None, help="parallel trial processes")
        parser.add_argument("--timing", action="store_true", help="fill the runtime column")
        add_scenario_arguments(parser)
        add_solver_arguments(parser, alpha=False)

    def execute(self, args: argparse.Namespace) -> int:
        alphas = parse_float_list(args.alphas, "alpha")
        spec = scenario_spec(args)
        cfg = solver_config(args)
        workers = args.workers or self.config.workers

        results = sweep_alpha(spec, alphas, cfg, workers=workers)
        text = write_table(table_rows(results, timing=args.timing), comments=[f"seed={spec.seed}"])
        if args.out is not None:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)

        console.print(create_sweep_table(results))
        capped = [t.outcome("mcc").alpha for t in results if not t.outcome("mcc").report.converged]
        if capped:
            print_warning("no convergence for alpha " + ", ".join(f"{a:g}" for a in capped))
            return EXIT_NOT_CONVERGED
        return EXIT_OK
