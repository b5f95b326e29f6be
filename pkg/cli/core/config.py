"""CLI configuration management."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from cli.core.files import FORMATS
from src.core.config import settings


@dataclass
class CLIConfig:
    """Output settings shared by every command."""

    output_dir: Path = field(default_factory=lambda: Path.cwd())
    # g2o or json; used where a command writes a file whose name gives no hint
    output_format: str = "json"
    workers: int = field(default_factory=lambda: settings.workers)

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise ValueError(
                f"output format must be one of {', '.join(FORMATS)}, got {self.output_format!r}"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")

    @classmethod
    def from_env(cls) -> CLIConfig:
        """Create config from environment variables (MCC_OUTPUT_DIR, MCC_OUTPUT_FORMAT, MCC_WORKERS)."""
        workers = os.getenv("MCC_WORKERS")
        try:
            n_workers = int(workers) if workers is not None else settings.workers
        except ValueError:
            raise ValueError(f"MCC_WORKERS must be an integer, got {workers!r}") from None
        return cls(
            output_dir=Path(os.getenv("MCC_OUTPUT_DIR", Path.cwd())),
            output_format=os.getenv("MCC_OUTPUT_FORMAT", "json").lower(),
            workers=n_workers,
        )


# Global config instance
_config: CLIConfig | None = None


def get_config() -> CLIConfig:
    """Get or create the global CLI configuration."""
    global _config
    if _config is None:
        _config = CLIConfig.from_env()
    return _config
