"""
Reader and writer for the 3D subset of the g2o text format.

Supported records::

    VERTEX_SE3:QUAT id tx ty tz qx qy qz qw
    EDGE_SE3:QUAT i j tx ty tz qx qy qz qw [21 upper-triangular information entries]

The information matrix is parsed and discarded; edge weights come from
residuals, not covariances. View ids that already form 0..N-1 are kept as
written; any other id set is remapped to 0..N-1 in order of first appearance.
Edge measurements follow M_ij = M_i^-1 M_j.
"""

from __future__ import annotations

import io
import logging
from typing import TextIO

import numpy as np

from src.core.errors import GraphError, ParseError, UnsupportedRecord
from src.graph.model import GlobalMotionSet, MotionGraph, RelativeMotionEdge, build_graph
from src.graph.quaternion import quaternion_to_rotation, rotation_to_quaternion
from src.lie.se3 import Motion

logger = logging.getLogger(__name__)

VERTEX_TAG = "VERTEX_SE3:QUAT"
EDGE_TAG = "EDGE_SE3:QUAT"

_INFO_ENTRIES = 21


def _floats(tokens: list[str], line_no: int) -> list[float]:
    try:
        values = [float(tok) for tok in tokens]
    except ValueError as e:
        raise ParseError(line_no, f"expected a number: {e}") from None
    if not all(np.isfinite(values)):
        raise ParseError(line_no, "non-finite number")
    return values


def _pose(values: list[float], line_no: int) -> Motion:
    t = np.array(values[0:3])
    q = np.array(values[3:7])
    try:
        r = quaternion_to_rotation(q)
    except ValueError as e:
        raise ParseError(line_no, str(e)) from None
    return Motion(r, t)


def _format(x: float) -> str:
    # 17 significant digits; "+ 0.0" folds -0.0 into 0.0
    return f"{float(x) + 0.0:.17g}"


def _dense_ids(order: list[int]) -> dict[int, int]:
    """Ids already forming 0..N-1 are kept; anything else is remapped by first appearance."""
    if sorted(order) == list(range(len(order))):
        return {raw: raw for raw in order}
    return {raw: dense for dense, raw in enumerate(order)}


def _view_id(value: float, line_no: int) -> int:
    if value != int(value) or value < 0:
        raise ParseError(line_no, f"view id {value:g} is not a non-negative integer")
    return int(value)


def parse_g2o(
    source: str | TextIO, *, strict: bool = False
) -> tuple[MotionGraph, GlobalMotionSet | None]:
    """
    Parse a g2o document into a graph and, when vertices are present, initial globals.

    Either the whole document is valid or a ParseError with a line number is
    raised; a partially valid graph is never returned. Unknown record tags are
    skipped with a warning, or raised as UnsupportedRecord when `strict`.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source

    order: list[int] = []
    seen: set[int] = set()

    def note(raw: int) -> None:
        if raw not in seen:
            seen.add(raw)
            order.append(raw)

    vertices: dict[int, Motion] = {}
    raw_edges: list[tuple[int, int, Motion]] = []
    edge_lines: list[int] = []
    skipped = 0
    line_no = 0

    for line_no, raw_line in enumerate(stream, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        tag, *rest = line.split()

        if tag == VERTEX_TAG:
            if len(rest) != 8:
                raise ParseError(line_no, f"{VERTEX_TAG} expects 8 fields, got {len(rest)}")
            values = _floats(rest, line_no)
            view = _view_id(values[0], line_no)
            if view in vertices:
                raise ParseError(line_no, f"vertex {view} defined twice")
            note(view)
            vertices[view] = _pose(values[1:], line_no)

        elif tag == EDGE_TAG:
            if len(rest) not in (9, 9 + _INFO_ENTRIES):
                raise ParseError(
                    line_no,
                    f"{EDGE_TAG} expects 9 or {9 + _INFO_ENTRIES} fields, got {len(rest)}",
                )
            values = _floats(rest, line_no)
            i = _view_id(values[0], line_no)
            j = _view_id(values[1], line_no)
            note(i)
            note(j)
            raw_edges.append((i, j, _pose(values[2:9], line_no)))
            edge_lines.append(line_no)

        else:
            if strict:
                raise UnsupportedRecord(line_no, tag)
            skipped += 1
            logger.warning("line %d: skipping unsupported record %r", line_no, tag)

    if not order:
        raise ParseError(line_no, "no vertices or edges found")

    ids = _dense_ids(order)
    edges = [RelativeMotionEdge(ids[i], ids[j], m) for i, j, m in raw_edges]

    try:
        graph = build_graph(len(order), edges)
    except GraphError as e:
        where = edge_lines[e.edge] if e.edge is not None else line_no
        raise ParseError(where, str(e)) from None

    globals_: GlobalMotionSet | None = None
    if vertices:
        missing = [raw for raw in order if raw not in vertices]
        if missing:
            raise ParseError(
                line_no, "vertices are missing for ids " + ", ".join(str(v) for v in missing)
            )
        by_dense = {ids[raw]: m for raw, m in vertices.items()}
        globals_ = GlobalMotionSet(tuple(by_dense[v] for v in range(len(order))))

    if skipped:
        logger.info("parsed g2o document with %d skipped record(s)", skipped)

    return graph, globals_


def _pose_fields(m: Motion) -> str:
    q = rotation_to_quaternion(m.r)
    return " ".join(_format(x) for x in [*m.t, *q])


def write_g2o(graph: MotionGraph | None, globals_: GlobalMotionSet | None = None) -> str:
    """Serialize vertices (if given) then edges; ids are the dense view indices."""
    lines: list[str] = []
    if globals_ is not None:
        for view, m in enumerate(globals_):
            lines.append(f"{VERTEX_TAG} {view} {_pose_fields(m)}")
    if graph is not None:
        for e in graph.edges:
            lines.append(f"{EDGE_TAG} {e.i} {e.j} {_pose_fields(e.measurement)}")
    return "\n".join(lines) + "\n"
