"""
View-graph data model.

Convention, used by every file format as well: the measurement on edge (i, j)
is M_ij = M_i^-1 M_j, so a consistent set of global motions satisfies
M_j = M_i M_ij.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components as _components

from src.core.config import settings
from src.core.errors import (
    Disconnected,
    DuplicateEdge,
    EmptyGraph,
    IndexOutOfRange,
    InvalidMotion,
    InvalidWeight,
    LengthMismatch,
    SelfLoop,
)
from src.lie.se3 import Motion, compose, frobenius_residual, inverse, validate_motion

# Smallest weight an edge may carry; the Gaussian kernel underflows to 0.0 for gross outliers.
MIN_WEIGHT = float(np.finfo(np.float64).tiny)


@dataclass(frozen=True, eq=False)
class RelativeMotionEdge:
    i: int
    j: int
    measurement: Motion
    weight: float = 1.0

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.i, self.j), max(self.i, self.j))


@dataclass(frozen=True, eq=False)
class MotionGraph:
    n_views: int
    edges: tuple[RelativeMotionEdge, ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.edges], dtype=np.float64)

    def with_weights(self, weights: Sequence[float] | np.ndarray) -> MotionGraph:
        """Copy of the graph with per-edge weights replaced (clamped into (0, 1])."""
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (self.n_edges,):
            raise ValueError(f"expected {self.n_edges} weights, got shape {w.shape}")
        w = np.clip(w, MIN_WEIGHT, 1.0)
        edges = tuple(
            RelativeMotionEdge(e.i, e.j, e.measurement, float(wh))
            for e, wh in zip(self.edges, w, strict=True)
        )
        return MotionGraph(self.n_views, edges)

    def with_measurements(self, measurements: Sequence[Motion]) -> MotionGraph:
        if len(measurements) != self.n_edges:
            raise ValueError(f"expected {self.n_edges} measurements, got {len(measurements)}")
        edges = tuple(
            RelativeMotionEdge(e.i, e.j, m, e.weight)
            for e, m in zip(self.edges, measurements, strict=True)
        )
        return MotionGraph(self.n_views, edges)


@dataclass(frozen=True, eq=False)
class GlobalMotionSet:
    """Global motions of all views; index 0 is the gauge reference."""

    motions: tuple[Motion, ...]

    def __post_init__(self):
        object.__setattr__(self, "motions", tuple(self.motions))

    @classmethod
    def identity(cls, n_views: int) -> GlobalMotionSet:
        return cls(tuple(Motion.identity() for _ in range(n_views)))

    @property
    def n_views(self) -> int:
        return len(self.motions)

    def __len__(self) -> int:
        return len(self.motions)

    def __getitem__(self, idx: int) -> Motion:
        return self.motions[idx]

    def __iter__(self) -> Iterator[Motion]:
        return iter(self.motions)

    def left_multiply(self, g: Motion) -> GlobalMotionSet:
        """G * M_i for every view (a change of gauge)."""
        return GlobalMotionSet(tuple(compose(g, m) for m in self.motions))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(m.r)) and np.all(np.isfinite(m.t)) for m in self.motions)


def build_graph(n_views: int, edges: Iterable[RelativeMotionEdge]) -> MotionGraph:
    """Validate edges against the graph invariants and assemble the graph."""
    if n_views < 1:
        raise IndexOutOfRange(f"a motion graph needs at least one view, got n_views={n_views}")

    edges = tuple(edges)
    seen: dict[tuple[int, int], int] = {}

    for h, e in enumerate(edges):
        for end in (e.i, e.j):
            if not 0 <= end < n_views:
                raise IndexOutOfRange(
                    f"edge {h} ({e.i}, {e.j}) references view {end} outside 0..{n_views - 1}",
                    edge=h,
                )
        if e.i == e.j:
            raise SelfLoop(f"edge {h} connects view {e.i} to itself", edge=h)
        if e.pair in seen:
            raise DuplicateEdge(
                f"edge {h} ({e.i}, {e.j}) duplicates edge {seen[e.pair]} on the same view pair",
                edge=h,
            )
        seen[e.pair] = h

        check = validate_motion(e.measurement, settings.motion_tolerance)
        if not check.ok:
            raise InvalidMotion(f"edge {h} ({e.i}, {e.j}) measurement fails: {check.reason}", edge=h)
        if not (math.isfinite(e.weight) and 0.0 < e.weight <= 1.0):
            raise InvalidWeight(f"edge {h} ({e.i}, {e.j}) weight {e.weight} is outside (0, 1]", edge=h)

    return MotionGraph(n_views, edges)


def _adjacency(g: MotionGraph) -> csr_matrix:
    rows = [e.i for e in g.edges]
    cols = [e.j for e in g.edges]
    data = np.ones(len(rows))
    return coo_matrix((data, (rows, cols)), shape=(g.n_views, g.n_views)).tocsr()


def connected_components(g: MotionGraph) -> list[list[int]]:
    """Views grouped by undirected connectivity, ordered by their smallest view."""
    _, labels = _components(_adjacency(g), directed=False)
    groups: dict[int, list[int]] = {}
    for view, label in enumerate(labels):
        groups.setdefault(int(label), []).append(view)
    return sorted(groups.values(), key=lambda c: c[0])


def is_connected(g: MotionGraph) -> bool:
    if g.n_views <= 1:
        return True
    return len(connected_components(g)) == 1


def _edge_lookup(g: MotionGraph) -> dict[tuple[int, int], int]:
    return {e.pair: h for h, e in enumerate(g.edges)}


def _bfs_tree(g: MotionGraph) -> list[tuple[int, int, int]]:
    """(parent, child, edge index) in breadth-first order from view 0."""
    if g.n_views <= 1:
        return []
    order, predecessors = breadth_first_order(
        _adjacency(g), 0, directed=False, return_predecessors=True
    )
    lookup = _edge_lookup(g)
    tree = []
    for child in order[1:]:
        parent = int(predecessors[child])
        child = int(child)
        tree.append((parent, child, lookup[(min(parent, child), max(parent, child))]))
    return tree


def spanning_tree_edges(g: MotionGraph) -> list[int]:
    """Edge indices of the breadth-first spanning tree rooted at view 0."""
    return [h for _, _, h in _bfs_tree(g)]


def spanning_tree_init(g: MotionGraph) -> GlobalMotionSet:
    """Chain measurements along the BFS tree from view 0 (fixed at identity)."""
    if not is_connected(g):
        raise Disconnected(connected_components(g))

    motions: list[Motion | None] = [None] * g.n_views
    motions[0] = Motion.identity()

    for parent, child, h in _bfs_tree(g):
        edge = g.edges[h]
        base = motions[parent]
        assert base is not None
        if edge.i == parent:
            motions[child] = compose(base, edge.measurement)
        else:
            motions[child] = compose(base, inverse(edge.measurement))

    return GlobalMotionSet(tuple(m for m in motions if m is not None))


def check_lengths(g: MotionGraph, globals_: GlobalMotionSet) -> None:
    if len(globals_) != g.n_views:
        raise LengthMismatch(g.n_views, len(globals_))


def edge_residuals(g: MotionGraph, globals_: GlobalMotionSet) -> np.ndarray:
    """|| M_ij - M_i^-1 M_j ||_F per edge, in edge order."""
    check_lengths(g, globals_)
    return np.array(
        [frobenius_residual(e.measurement, globals_[e.i], globals_[e.j]) for e in g.edges],
        dtype=np.float64,
    )


def residual_motion_error(g: MotionGraph, globals_: GlobalMotionSet) -> float:
    """Mean per-edge Frobenius residual, e_{M,k}."""
    if g.n_edges == 0:
        raise EmptyGraph("residual motion error is undefined for a graph without edges")
    return math.fsum(edge_residuals(g, globals_).tolist()) / g.n_edges
