"""Main CLI entry point."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from cli import __app_name__, __version__
from cli.commands import COMMANDS
from cli.commands.base import EXIT_ERROR, BaseCommand
from cli.core.config import CLIConfig, get_config
from cli.ui.console import print_error, setup_logging


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1; status 2 is reserved for non-convergence."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print_error(message, title=f"{self.prog}: usage")
        raise SystemExit(EXIT_ERROR)


def build_parser(config: CLIConfig) -> tuple[argparse.ArgumentParser, dict[str, BaseCommand]]:
    parser = _ArgumentParser(
        prog="mcc-average",
        description=f"{__app_name__} - robust motion averaging under the maximum correntropy criterion",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for progress, -vv for every iteration"
    )
    parser.add_argument("--version", action="version", version=f"{__app_name__} {__version__}")

    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    commands: dict[str, BaseCommand] = {}
    for cls in COMMANDS:
        command = cls(config)
        sub = subparsers.add_parser(
            command.name,
            help=command.description,
            description=command.description,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        command.add_arguments(sub)
        commands[command.name] = command
    return parser, commands


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point."""
    try:
        config = get_config()
    except ValueError as e:
        print_error(str(e), title="Configuration")
        return EXIT_ERROR
    parser, commands = build_parser(config)
    args = parser.parse_args(argv)

    setup_logging(args.verbose)
    return commands[args.command].run(args)


if __name__ == "__main__":
    sys.exit(main())
