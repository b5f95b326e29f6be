"""Compare command - MCC against plain averaging over many seeds."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from cli.commands.base import (
    EXIT_OK,
    BaseCommand,
    add_scenario_arguments,
    add_solver_arguments,
    scenario_spec,
    solver_config,
)
from cli.core.files import atomic_write
from cli.ui.console import console, print_warning
from cli.ui.panels import create_compare_table
from src.averaging.solver import MODES
from src.bench.trials import METHODS, run_seeds, table_rows, write_table


class CompareCommand(BaseCommand):
    name = "compare"
    description = "Compare averaging methods on the same scenes across seeds"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--seeds", type=int, default=20, help="number of consecutive seeds from --seed")
        parser.add_argument(
            "--methods", default=",".join(METHODS), help=f"comma-separated subset of {', '.join(MODES)}"
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
        add_solver_arguments(parser)

    def execute(self, args: argparse.Namespace) -> int:
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        unknown = [m for m in methods if m not in MODES]
        if unknown or not methods:
            raise ValueError(f"unknown method(s) {', '.join(unknown) or '(none given)'}")
        if args.seeds < 1:
            raise ValueError(f"--seeds must be at least 1, got {args.seeds}")

        spec = scenario_spec(args)
        cfg = solver_config(args)
        seeds = range(spec.seed, spec.seed + args.seeds)
        results = run_seeds(spec, cfg, seeds, methods=methods, workers=args.workers or self.config.workers)

        text = write_table(
            table_rows(results, timing=args.timing),
            comments=[f"seeds={seeds.start}..{seeds.stop - 1}"],
        )
        if args.out is not None:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)

        console.print(create_compare_table(results, methods))
        capped = sum(1 for t in results for o in t.outcomes if not o.report.converged)
        if capped:
            print_warning(f"{capped} run(s) stopped at the iteration cap")
        return EXIT_OK
