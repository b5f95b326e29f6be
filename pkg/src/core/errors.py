"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from src.averaging.solver import SolveReport


class MotionAveragingError(ValueError):
    """Base class for every error raised by this package."""


class AngleNearPi(MotionAveragingError):
    def __init__(self, angle: float, guard: float, edge: int | None = None):
        self.angle = angle
        self.guard = guard
        self.edge = edge
        where = f" on edge {edge}" if edge is not None else ""
        super().__init__(
            f"rotation angle {angle:.12g} rad is within {guard:g} of pi{where}; "
            "the logarithm branch is ambiguous"
        )


class GraphError(MotionAveragingError):
    def __init__(self, message: str, edge: int | None = None):
        self.edge = edge
        super().__init__(message)


class IndexOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class InvalidMotion(GraphError):
    pass


class InvalidWeight(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class Disconnected(GraphError):
    def __init__(self, components: list[list[int]]):
        self.components = components
        shown = "; ".join("{" + ", ".join(str(v) for v in c) + "}" for c in components)
        super().__init__(f"view graph has {len(components)} connected components: {shown}")


class ParseError(MotionAveragingError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnsupportedRecord(MotionAveragingError):
    def __init__(self, line: int, tag: str):
        self.line = line
        self.tag = tag
        super().__init__(f"line {line}: unsupported record {tag!r}")


class SchemaError(MotionAveragingError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class RankDeficientBeyondGauge(MotionAveragingError):
    def __init__(self, rank: int, required: int):
        self.rank = rank
        self.required = required
        super().__init__(
            f"linear system rank {rank} is below {required}; "
            "the view graph is disconnected or degenerate"
        )


class NonFiniteError(MotionAveragingError):
    def __init__(self, iteration: int, report: SolveReport | Any = None):
        self.iteration = iteration
        self.report = report
        super().__init__(f"iteration {iteration} produced non-finite global motions")


class LengthMismatch(MotionAveragingError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"motion sets differ in length: {left} vs {right}")
