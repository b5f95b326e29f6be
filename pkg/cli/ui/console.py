"""Rich console instance, message helpers and logging setup."""

from __future__ import annotations

import logging

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.text import Text

from cli.ui.theme import get_theme

# Standard output carries machine-readable results, so everything for humans goes to stderr
console = Console(theme=get_theme().to_rich_theme(), highlight=True, stderr=True)


def _message_panel(message: str, title: str, color: str, icon: str) -> Panel:
    content = Text()
    content.append(message, style=color)
    return Panel(
        content,
        title=f"[{color} bold]{icon} {title}[/{color} bold]",
        border_style=color,
        box=box.ROUNDED,
        padding=(0, 2),
    )


def print_error(message: str, title: str = "Error") -> None:
    console.print(_message_panel(message, title, "#FF5252", "✖"))


def print_success(message: str, title: str = "Success") -> None:
    console.print(_message_panel(message, title, "#00E676", "✔"))


def print_warning(message: str, title: str = "Warning") -> None:
    console.print(_message_panel(message, title, "#FFB347", "⚠"))


def setup_logging(verbosity: int = 0) -> None:
    """Route library logging through rich: WARNING by default, -v for INFO, -vv for DEBUG."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False, rich_tracebacks=True)],
        force=True,
    )
