"""CLI commands."""

from cli.commands.average import AverageCommand
from cli.commands.compare import CompareCommand
from cli.commands.eval import EvalCommand
from cli.commands.sweep import SweepCommand
from cli.commands.synth import SynthCommand

COMMANDS = (AverageCommand, SynthCommand, SweepCommand, CompareCommand, EvalCommand)

__all__ = [
    "AverageCommand",
    "SynthCommand",
    "SweepCommand",
    "CompareCommand",
    "EvalCommand",
    "COMMANDS",
]
