"""Reading and writing graph files by format, and atomic output."""

from __future__ import annotations

import os
import tempfile
from collections.abc import Mapping
from pathlib import Path

from src.averaging.solver import SolveReport
from src.core.errors import SchemaError
from src.graph.documents import parse_json, write_json
from src.graph.g2o import parse_g2o, write_g2o
from src.graph.model import GlobalMotionSet, MotionGraph

SUFFIX_FORMATS = {".g2o": "g2o", ".json": "json"}
FORMATS = tuple(SUFFIX_FORMATS.values())


class FileFormatError(ValueError):
    pass


def sniff_format(path: Path, override: str | None = None) -> str:
    """Format from the explicit override, else from the file extension; never guessed."""
    if override is not None:
        if override not in FORMATS:
            raise FileFormatError(f"unknown format {override!r}; expected one of {', '.join(FORMATS)}")
        return override
    fmt = SUFFIX_FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise FileFormatError(
            f"cannot tell the format of {path} from its extension; pass --format g2o or --format json"
        )
    return fmt


def _stage(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return Path(tmp)


def atomic_write(path: Path, text: str) -> None:
    """Write to a temporary file beside `path`, then rename it into place."""
    atomic_write_all({Path(path): text})


def atomic_write_all(files: Mapping[Path, str]) -> None:
    """
    Write several files as one unit: every file is staged beside its target
    before any is renamed into place. If a step fails, staged files and any
    target that did not exist beforehand are removed again.
    """
    staged: list[tuple[Path, Path]] = []
    placed: list[tuple[Path, bool]] = []
    try:
        for path, text in files.items():
            path = Path(path)
            staged.append((path, _stage(path, text)))
        for path, tmp in staged:
            existed = path.exists()
            os.replace(tmp, path)
            placed.append((path, existed))
    except BaseException:
        for _, tmp in staged:
            tmp.unlink(missing_ok=True)
        for path, existed in placed:
            if not existed:
                path.unlink(missing_ok=True)
        raise


def read_graph(
    path: Path, fmt: str | None = None, *, strict: bool = False
) -> tuple[MotionGraph, GlobalMotionSet | None, SolveReport | None]:
    text = Path(path).read_text(encoding="utf-8")
    if sniff_format(path, fmt) == "g2o":
        graph, globals_ = parse_g2o(text, strict=strict)
        return graph, globals_, None
    return parse_json(text)


def read_globals(path: Path, fmt: str | None = None) -> GlobalMotionSet:
    _, globals_, _ = read_graph(path, fmt)
    if globals_ is None:
        raise SchemaError("globals", f"{path} holds no global motions")
    return globals_


def dump_graph(
    fmt: str,
    graph: MotionGraph | None,
    globals_: GlobalMotionSet | None = None,
    report: SolveReport | None = None,
) -> str:
    if fmt == "g2o":
        return write_g2o(graph, globals_)
    if graph is None:
        assert globals_ is not None
        graph = MotionGraph(len(globals_), ())
    return write_json(graph, globals_, report)
