"""Base command class and the flag groups shared between commands."""

from __future__ import annotations

import argparse
import logging
from abc import ABC, abstractmethod

from cli.core.config import CLIConfig
from cli.ui.console import print_error
from src.averaging.solver import GAUGES, MODES, SolverConfig
from src.bench.scenario import ScenarioSpec
from src.core.config import settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


class BaseCommand(ABC):
    """Base class for all CLI commands."""

    name: str = "base"
    description: str = "Base command"

    def __init__(self, config: CLIConfig):
        self.config = config

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare this command's flags on its subparser."""

    @abstractmethod
    def execute(self, args: argparse.Namespace) -> int:
        """
        Execute the command.

        Returns:
            Process exit status
        """

    def run(self, args: argparse.Namespace) -> int:
        """Execute, reporting library and file errors as an error panel with exit status 1."""
        try:
            return self.execute(args)
        except (ValueError, OSError) as e:
            logger.debug("%s failed", self.name, exc_info=True)
            print_error(str(e), title=type(e).__name__)
            return EXIT_ERROR


def add_solver_arguments(parser: argparse.ArgumentParser, *, alpha: bool = True) -> None:
    group = parser.add_argument_group("solver")
    group.add_argument("--method", choices=MODES, default=settings.mode, help="averaging mode")
    if alpha:
        group.add_argument(
            "--alpha", type=float, default=settings.alpha, help="kernel width multiplier"
        )
    group.add_argument(
        "--max-iterations", type=int, default=settings.max_iterations, help="iteration cap K"
    )
    group.add_argument(
        "--tol",
        type=float,
        default=settings.change_tolerance,
        help="stop once the largest twist update falls below this",
    )
    group.add_argument(
        "--sigma-floor", type=float, default=settings.sigma_floor, help="smallest kernel width"
    )
    group.add_argument(
        "--gauge",
        choices=GAUGES,
        default=settings.gauge,
        help=(
            "discard the view-0 block of each step, or shift the step so view 0 stays fixed; "
            "discard converges slowly on larger graphs and often reaches the iteration cap, "
            "anchor is the faster choice"
        ),
    )


def solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        alpha=getattr(args, "alpha", settings.alpha),
        max_iterations=args.max_iterations,
        change_tolerance=args.tol,
        sigma_floor=args.sigma_floor,
        mode=args.method,
        gauge=args.gauge,
    )


def add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scenario")
    group.add_argument("--views", type=int, default=settings.views, help="number of views")
    group.add_argument(
        "--density", type=float, default=settings.density, help="fraction of view pairs with an edge"
    )
    group.add_argument(
        "--rot-noise",
        type=float,
        default=settings.rot_noise_deg,
        help="per-axis rotation noise std (degrees)",
    )
    group.add_argument(
        "--trans-noise", type=float, default=settings.trans_noise, help="per-axis translation noise std"
    )
    group.add_argument(
        "--outliers", type=float, default=settings.outliers, help="fraction of edges replaced by outliers"
    )
    group.add_argument("--seed", type=int, default=settings.seed, help="scenario seed")


def scenario_spec(args: argparse.Namespace) -> ScenarioSpec:
    return ScenarioSpec(
        n_views=args.views,
        edge_density=args.density,
        rot_noise_deg=args.rot_noise,
        trans_noise=args.trans_noise,
        outlier_fraction=args.outliers,
        seed=args.seed,
        init_perturbation=getattr(args, "init_perturbation", 0.0),
    )


def parse_float_list(text: str, what: str) -> list[float]:
    """Comma-separated floats; the first bad token is named in the error."""
    values = []
    for token in text.split(","):
        token = token.strip()
        try:
            values.append(float(token))
        except ValueError:
            raise ValueError(f"invalid {what} {token!r} in {text!r}") from None
    return values
