"""Synth command - write a synthetic contaminated view graph with its ground truth."""

from __future__ import annotations

import argparse
from pathlib import Path

from cli.commands.base import EXIT_OK, BaseCommand, add_scenario_arguments, scenario_spec
from cli.core.files import FORMATS, atomic_write_all, dump_graph
from cli.ui.console import console, print_success
from cli.ui.panels import create_statistics_panel
from src.bench.trials import build_scene
from src.graph.documents import write_labels_json

GRAPH_FILE = "graph"
GROUND_TRUTH_FILE = "ground_truth"
LABELS_FILE = "labels.json"


class SynthCommand(BaseCommand):
    name = "synth"
    description = "Generate a synthetic view graph, its ground truth and outlier labels"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_scenario_arguments(parser)
        parser.add_argument(
            "--out", type=Path, default=None, help="output directory (default: current directory)"
        )
        parser.add_argument(
            "--format", choices=FORMATS, default=None, help="graph and ground-truth file format"
        )

    def execute(self, args: argparse.Namespace) -> int:
        spec = scenario_spec(args)
        out_dir: Path = args.out or self.config.output_dir
        fmt = args.format or self.config.output_format

        scene = build_scene(spec)
        stats = scene.statistics()

        graph_path = out_dir / f"{GRAPH_FILE}.{fmt}"
        truth_path = out_dir / f"{GROUND_TRUTH_FILE}.{fmt}"
        labels_path = out_dir / LABELS_FILE
        atomic_write_all(
            {
                graph_path: dump_graph(fmt, scene.graph),
                truth_path: dump_graph(fmt, None, scene.ground_truth),
                labels_path: write_labels_json(spec.seed, scene.outliers, stats),
            }
        )

        console.print(create_statistics_panel(stats, scene.graph.n_edges, len(scene.outliers)))
        print_success(
            f"{graph_path}\n{truth_path}\n{labels_path}", title=f"Scenario seed {spec.seed}"
        )
        return EXIT_OK
