"""Eval command - accuracy of estimated global motions against ground truth."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from cli.commands.base import EXIT_OK, BaseCommand
from cli.core.files import FORMATS, read_globals
from cli.ui.console import console
from cli.ui.panels import create_eval_panel
from src.bench.metrics import evaluate
from src.graph.documents import write_eval_json


class EvalCommand(BaseCommand):
    name = "eval"
    description = "Compare estimated global motions with ground truth (e_R, e_t)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("estimate", type=Path, help="estimated global motions")
        parser.add_argument("ground_truth", type=Path, help="ground-truth global motions")
        parser.add_argument("--format", choices=FORMATS, help="format of both files, overriding extensions")

    def execute(self, args: argparse.Namespace) -> int:
        result = evaluate(read_globals(args.estimate, args.format), read_globals(args.ground_truth, args.format))
        sys.stdout.write(write_eval_json(result))
        console.print(create_eval_panel(result))
        return EXIT_OK
