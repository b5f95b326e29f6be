"""Average command - solve for global motions from a relative-motion file."""

from __future__ import annotations

import argparse
from pathlib import Path

from cli.commands.base import (
    EXIT_ERROR,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    BaseCommand,
    add_solver_arguments,
    solver_config,
)
from cli.core.files import (
    FORMATS,
    atomic_write,
    atomic_write_all,
    dump_graph,
    read_globals,
    read_graph,
    sniff_format,
)
from cli.ui.console import console, print_error, print_warning
from cli.ui.panels import create_report_panel
from src.averaging.solver import solve
from src.core.errors import NonFiniteError
from src.graph.documents import write_report_json
from src.graph.model import residual_motion_error, spanning_tree_init


class AverageCommand(BaseCommand):
    """Robust motion averaging of one view graph."""

    name = "average"
    description = "Estimate global motions from a g2o or JSON view graph"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("input", type=Path, help="view graph (.g2o or .json)")
        parser.add_argument(
            "--init",
            type=Path,
            help="initial global motions (default: those stored in the input, else spanning-tree chaining)",
        )
        parser.add_argument(
            "-o", "--out", type=Path, help="final global motions (default: <input>.averaged.<ext>)"
        )
        parser.add_argument(
            "--tree-init",
            action="store_true",
            help="ignore global motions stored in the input and chain the spanning tree instead",
        )
        parser.add_argument(
            "--report", type=Path, help="solver report JSON (default: <out>.report.json)"
        )
        parser.add_argument("--format", choices=FORMATS, help="input format, overriding the extension")
        parser.add_argument("--out-format", choices=FORMATS, help="output format")
        parser.add_argument(
            "--strict", action="store_true", help="reject unknown g2o records instead of skipping them"
        )
        parser.add_argument("--timing", action="store_true", help="record wall-clock runtime in the report")
        add_solver_arguments(parser)

    def _outputs(self, args: argparse.Namespace, in_fmt: str) -> tuple[Path, str, Path]:
        if args.out is not None:
            out_fmt = args.out_format or sniff_format(args.out)
            out = args.out
        else:
            out_fmt = args.out_format or in_fmt
            out = args.input.with_name(f"{args.input.stem}.averaged.{out_fmt}")
        report = args.report or out.with_name(f"{out.stem}.report.json")
        return out, out_fmt, report

    def execute(self, args: argparse.Namespace) -> int:
        in_fmt = sniff_format(args.input, args.format)
        out, out_fmt, report_path = self._outputs(args, in_fmt)

        graph, embedded, _ = read_graph(args.input, in_fmt, strict=args.strict)
        if args.init is not None:
            init = read_globals(args.init)
        elif embedded is not None and not args.tree_init:
            init = embedded
        else:
            init = spanning_tree_init(graph)
        cfg = solver_config(args)

        try:
            estimate, report = solve(graph, init, cfg)
        except NonFiniteError as e:
            if e.report is not None:
                atomic_write(report_path, write_report_json(e.report, include_runtime=args.timing))
            print_error(str(e), title="NonFiniteError")
            return EXIT_ERROR

        atomic_write_all(
            {
                out: dump_graph(out_fmt, graph, estimate),
                report_path: write_report_json(report, include_runtime=args.timing),
            }
        )

        console.print(create_report_panel(report, residual_motion_error(graph, estimate)))
        console.print(f"  [muted]globals:[/muted] [path]{out}[/path]")
        console.print(f"  [muted]report:[/muted]  [path]{report_path}[/path]")

        if not report.converged:
            print_warning(
                f"stopped after {report.iterations_run} iterations without meeting the change tolerance"
            )
            return EXIT_NOT_CONVERGED
        return EXIT_OK
