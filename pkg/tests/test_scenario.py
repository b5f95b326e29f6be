"""Tests for synthetic scene generation."""

import math

import numpy as np
import pytest

from src.bench.scenario import (
    ScenarioSpec,
    generate_ground_truth,
    inject_outliers,
    make_relative_motions,
    perturb_edges,
    perturb_globals,
)
from src.graph.model import (
    RelativeMotionEdge,
    build_graph,
    edge_residuals,
    is_connected,
    residual_motion_error,
    spanning_tree_edges,
)
from src.lie.se3 import Motion, compose, inverse, log_motion, validate_motion


class TestScenarioSpec:
    """Scenario validation and defaults."""

    def test_defaults(self):
        spec = ScenarioSpec()
        assert (spec.n_views, spec.edge_density, spec.outlier_fraction) == (15, 0.45, 0.15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_views": 1},
            {"edge_density": 0.0},
            {"edge_density": 1.5},
            {"rot_noise_deg": -1.0},
            {"outlier_fraction": 1.0},
            {"seed": -1},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ScenarioSpec(**kwargs)


class TestGroundTruth:
    """Random global motions."""

    def test_gauge_and_validity(self):
        gt = generate_ground_truth(2, 5)
        assert np.array_equal(gt[0].matrix, np.eye(4))
        assert validate_motion(gt[1]).ok

    def test_deterministic(self):
        a, b = generate_ground_truth(8, 11), generate_ground_truth(8, 11)
        assert all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a, b, strict=True))

    def test_seeds_differ(self):
        a, b = generate_ground_truth(3, 1), generate_ground_truth(3, 2)
        assert not np.array_equal(a[1].matrix, b[1].matrix)

    def test_ranges(self):
        gt = generate_ground_truth(50, 0)
        for m in gt.motions[1:]:
            assert log_motion(m).angle <= math.pi / 2 + 1e-12
            assert np.all(np.abs(m.t) <= 5.0)


class TestRelativeMotions:
    """Exactly consistent view graphs."""

    def test_complete_graph_at_full_density(self):
        gt = generate_ground_truth(7, 3)
        g = make_relative_motions(gt, 1.0, 4)
        assert g.n_edges == 21
        assert residual_motion_error(g, gt) < 1e-12

    def test_tree_at_tiny_density(self):
        gt = generate_ground_truth(12, 3)
        g = make_relative_motions(gt, 1e-9, 4)
        assert g.n_edges == 11
        assert is_connected(g)

    def test_always_connected_and_ordered(self):
        for seed in range(20):
            gt = generate_ground_truth(10, seed)
            g = make_relative_motions(gt, 0.3, seed)
            assert is_connected(g)
            assert all(e.i < e.j for e in g.edges)
            assert [e.pair for e in g.edges] == sorted(e.pair for e in g.edges)

    def test_density_is_respected_on_average(self):
        gt = generate_ground_truth(30, 0)
        counts = [make_relative_motions(gt, 0.5, s).n_edges for s in range(10)]
        assert abs(np.mean(counts) / 435 - 0.5) < 0.05


class TestPerturbEdges:
    """Right-multiplied Lie algebra noise."""

    def test_zero_noise_is_identity(self):
        gt = generate_ground_truth(5, 0)
        g = make_relative_motions(gt, 1.0, 0)
        assert perturb_edges(g, 0.0, 0.0, 1) is g

    def test_deterministic(self):
        g = make_relative_motions(generate_ground_truth(6, 0), 1.0, 0)
        a, b = perturb_edges(g, 0.3, 0.05, 9), perturb_edges(g, 0.3, 0.05, 9)
        assert all(
            np.array_equal(x.measurement.matrix, y.measurement.matrix)
            for x, y in zip(a.edges, b.edges, strict=True)
        )

    def test_rotation_noise_statistics(self):
        """Per-axis std of the sampled rotation noise is within 10% of the requested level."""
        n = 150
        identity = Motion.identity()
        g = build_graph(n, [RelativeMotionEdge(i, j, identity) for i in range(n) for j in range(i + 1, n)])
        noisy = perturb_edges(g, 0.3, 0.0, 21)
        omegas = np.array([log_motion(e.measurement).omega for e in noisy.edges])
        assert omegas.shape[0] >= 10_000
        target = math.radians(0.3)
        assert np.all(np.abs(omegas.std(axis=0) / target - 1) < 0.1)
        assert np.max(np.linalg.norm(omegas, axis=1)) < 6 * target * math.sqrt(3)


class TestInjectOutliers:
    """Gross outliers on non-tree edges."""

    def test_zero_fraction(self):
        g = make_relative_motions(generate_ground_truth(8, 0), 0.6, 0)
        out, labels = inject_outliers(g, 0.0, 1)
        assert out is g
        assert labels == frozenset()

    def test_count_and_exemption(self):
        gt = generate_ground_truth(10, 2)
        g = make_relative_motions(gt, 1.0, 2)  # 45 edges
        out, labels = inject_outliers(g, 3 / 45 + 1e-9, 5)
        assert len(labels) == 3
        assert labels.isdisjoint(spanning_tree_edges(g))
        for h in range(g.n_edges):
            same = np.array_equal(out.edges[h].measurement.matrix, g.edges[h].measurement.matrix)
            assert same == (h not in labels)

    def test_count_is_capped_at_non_tree_edges(self):
        g = make_relative_motions(generate_ground_truth(6, 0), 1e-9, 0)  # a tree
        _, labels = inject_outliers(g, 0.9, 0)
        assert labels == frozenset()

    def test_outliers_are_far_from_truth(self):
        for seed in range(10):
            gt = generate_ground_truth(12, seed)
            g, labels = inject_outliers(make_relative_motions(gt, 0.6, seed), 0.3, seed)
            residuals = edge_residuals(g, gt)
            assert labels
            assert all(residuals[h] >= 0.7 for h in labels)


class TestPerturbGlobals:
    """Random initial-guess perturbation."""

    def test_view_zero_kept_and_magnitude(self):
        gt = generate_ground_truth(6, 0)
        moved = perturb_globals(gt, 0.1, 3)
        assert moved[0] is gt[0]
        for a, b in zip(moved.motions[1:], gt.motions[1:], strict=True):
            step = log_motion(compose(inverse(b), a)).vector
            assert np.linalg.norm(step) == pytest.approx(0.1, rel=1e-9)

    def test_zero_magnitude(self):
        gt = generate_ground_truth(3, 0)
        assert perturb_globals(gt, 0.0, 1) is gt
