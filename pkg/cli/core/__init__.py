"""Core CLI components - configuration and file handling."""

from cli.core.config import CLIConfig, get_config
from cli.core.files import atomic_write, atomic_write_all, read_graph, sniff_format

__all__ = [
    "CLIConfig",
    "get_config",
    "atomic_write",
    "atomic_write_all",
    "read_graph",
    "sniff_format",
]
