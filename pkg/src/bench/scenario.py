"""
Synthetic view graphs with known ground truth.

Every random draw goes through a PCG64 generator seeded explicitly, so a
scenario is reproduced exactly from its seed on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from src.core.config import settings
from src.graph.model import (
    GlobalMotionSet,
    MotionGraph,
    RelativeMotionEdge,
    build_graph,
    spanning_tree_edges,
)
from src.lie.se3 import Motion, Twist, compose, exp_twist, inverse

SCENE_SIZE = 10.0
MAX_VIEW_ANGLE = math.pi / 2
OUTLIER_ANGLE_RANGE = (math.pi / 4, math.pi)

Seed = int | np.random.SeedSequence


def make_rng(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _unit_vectors(rng: np.random.Generator, n: int, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=(n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    return exp_twist(Twist(axis * angle, np.zeros(3))).r


def _scene_point(rng: np.random.Generator, n: int) -> np.ndarray:
    half = SCENE_SIZE / 2
    return rng.uniform(-half, half, size=(n, 3))


@dataclass(frozen=True)
class ScenarioSpec:
    n_views: int = field(default_factory=lambda: settings.views)
    edge_density: float = field(default_factory=lambda: settings.density)
    rot_noise_deg: float = field(default_factory=lambda: settings.rot_noise_deg)
    trans_noise: float = field(default_factory=lambda: settings.trans_noise)
    outlier_fraction: float = field(default_factory=lambda: settings.outliers)
    seed: int = field(default_factory=lambda: settings.seed)
    # Norm of the random twist applied to views >= 1 of the initial guess.
    init_perturbation: float = 0.0

    def __post_init__(self):
        if self.n_views < 2:
            raise ValueError(f"a scenario needs at least 2 views, got {self.n_views}")
        if not 0 < self.edge_density <= 1:
            raise ValueError(f"edge density must be in (0, 1], got {self.edge_density}")
        if self.rot_noise_deg < 0 or self.trans_noise < 0:
            raise ValueError("noise levels must be non-negative")
        if not 0 <= self.outlier_fraction < 1:
            raise ValueError(f"outlier fraction must be in [0, 1), got {self.outlier_fraction}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a non-negative 64-bit integer, got {self.seed}")
        if self.init_perturbation < 0:
            raise ValueError("init perturbation must be non-negative")

    def streams(self) -> dict[str, np.random.SeedSequence]:
        """Independent child seeds, one per stage of scene construction."""
        names = ("ground_truth", "edges", "noise", "outliers", "init")
        return dict(zip(names, np.random.SeedSequence(self.seed).spawn(len(names)), strict=True))


def generate_ground_truth(n_views: int, seed: Seed) -> GlobalMotionSet:
    """View 0 at identity, the rest with random axes, angles in [0, pi/2] and translations in the scene cube."""
    if n_views < 2:
        raise ValueError(f"ground truth needs at least 2 views, got {n_views}")
    rng = make_rng(seed)
    count = n_views - 1
    axes = _unit_vectors(rng, count)
    angles = rng.uniform(0.0, MAX_VIEW_ANGLE, size=count)
    translations = _scene_point(rng, count)

    motions = [Motion.identity()]
    for axis, angle, t in zip(axes, angles, translations, strict=True):
        motions.append(Motion(_rotation(axis, float(angle)), t))
    return GlobalMotionSet(tuple(motions))


def _random_tree(rng: np.random.Generator, n: int) -> set[tuple[int, int]]:
    order = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        parent = int(order[rng.integers(0, k)])
        child = int(order[k])
        pairs.add((min(parent, child), max(parent, child)))
    return pairs


def make_relative_motions(gt: GlobalMotionSet, edge_density: float, seed: Seed) -> MotionGraph:
    """
    Exactly consistent edges M_ij = M_i^-1 M_j over a random spanning tree plus
    extra pairs, each kept independently so that about `edge_density` of all
    unordered pairs end up as edges.
    """
    if not 0 < edge_density <= 1:
        raise ValueError(f"edge density must be in (0, 1], got {edge_density}")
    rng = make_rng(seed)
    n = gt.n_views
    pairs = _random_tree(rng, n)

    total = n * (n - 1) // 2
    extra = total - (n - 1)
    keep = max(0.0, (edge_density * total - (n - 1)) / extra) if extra > 0 else 0.0
    for i in range(n):
        for j in range(i + 1, n):
            draw = rng.random()
            if (i, j) not in pairs and draw < keep:
                pairs.add((i, j))

    edges = [
        RelativeMotionEdge(i, j, compose(inverse(gt[i]), gt[j])) for i, j in sorted(pairs)
    ]
    return build_graph(n, edges)


def perturb_edges(
    g: MotionGraph, rot_noise_deg: float, trans_noise: float, seed: Seed
) -> MotionGraph:
    """Right-multiply each measurement by exp of a twist with per-axis normal components."""
    if rot_noise_deg < 0 or trans_noise < 0:
        raise ValueError("noise levels must be non-negative")
    if rot_noise_deg == 0 and trans_noise == 0:
        return g
    rng = make_rng(seed)
    omegas = rng.normal(0.0, math.radians(rot_noise_deg), size=(g.n_edges, 3))
    us = rng.normal(0.0, trans_noise, size=(g.n_edges, 3))
    return g.with_measurements(
        [
            compose(e.measurement, exp_twist(Twist(w, u)))
            for e, w, u in zip(g.edges, omegas, us, strict=True)
        ]
    )


def inject_outliers(
    g: MotionGraph, outlier_fraction: float, seed: Seed
) -> tuple[MotionGraph, frozenset[int]]:
    """
    Replace floor(fraction * H) non-tree edges by gross outliers.

    The replacement rotation is the edge's rotation turned by a further
    angle in [pi/4, pi) about a random axis; its translation is a fresh point
    in the scene cube. Edges of the BFS spanning tree used for initialisation
    are never touched.
    """
    if not 0 <= outlier_fraction < 1:
        raise ValueError(f"outlier fraction must be in [0, 1), got {outlier_fraction}")
    tree = set(spanning_tree_edges(g))
    candidates = [h for h in range(g.n_edges) if h not in tree]
    count = min(math.floor(outlier_fraction * g.n_edges), len(candidates))
    if count == 0:
        return g, frozenset()

    rng = make_rng(seed)
    chosen = sorted(int(h) for h in rng.choice(candidates, size=count, replace=False))
    axes = _unit_vectors(rng, count)
    angles = rng.uniform(*OUTLIER_ANGLE_RANGE, size=count)
    translations = _scene_point(rng, count)

    measurements = [e.measurement for e in g.edges]
    for h, axis, angle, t in zip(chosen, axes, angles, translations, strict=True):
        measurements[h] = Motion(measurements[h].r @ _rotation(axis, float(angle)), t)
    return g.with_measurements(measurements), frozenset(chosen)


def perturb_globals(globals_: GlobalMotionSet, magnitude: float, seed: Seed) -> GlobalMotionSet:
    """Move views >= 1 by random twists of norm `magnitude`; view 0 is kept."""
    if magnitude < 0:
        raise ValueError(f"perturbation magnitude must be non-negative, got {magnitude}")
    if magnitude == 0 or len(globals_) < 2:
        return globals_
    rng = make_rng(seed)
    twists = magnitude * _unit_vectors(rng, len(globals_) - 1, dim=6)
    motions = [globals_[0]] + [
        compose(m, exp_twist(Twist.from_vector(x)))
        for m, x in zip(globals_.motions[1:], twists, strict=True)
    ]
    return GlobalMotionSet(tuple(motions))
