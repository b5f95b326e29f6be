"""Tests for the experiment drivers, including the end-to-end accuracy checks."""

import csv
import io
import statistics
from dataclasses import replace

import numpy as np
import pytest

from src.averaging.solver import SolverConfig
from src.bench.scenario import ScenarioSpec
from src.bench.trials import (
    TABLE_COLUMNS,
    build_scene,
    run_seeds,
    run_trial,
    sweep_alpha,
    table_rows,
    write_table,
)
from src.graph.model import is_connected

ANCHORED = SolverConfig(gauge="anchor", max_iterations=100, change_tolerance=1e-10)

CONTAMINATED = ScenarioSpec(
    n_views=15, edge_density=0.45, rot_noise_deg=0.3, trans_noise=0.05, outlier_fraction=0.15, seed=0
)


def _median(results, method, field="e_r"):
    return statistics.median(getattr(t.outcome(method).result, field) for t in results)


@pytest.fixture(scope="module")
def contaminated_runs():
    """Twenty contaminated seeds solved by both methods, plus the outlier-free floor."""
    seeds = range(20)
    runs = run_seeds(CONTAMINATED, ANCHORED, seeds)
    floor = run_seeds(replace(CONTAMINATED, outlier_fraction=0.0), ANCHORED, seeds, methods=("mcc",))
    return runs, floor


class TestScene:
    """Scene construction from a scenario."""

    def test_deterministic(self):
        a, b = build_scene(CONTAMINATED), build_scene(CONTAMINATED)
        assert a.outliers == b.outliers
        assert all(
            np.array_equal(x.measurement.matrix, y.measurement.matrix)
            for x, y in zip(a.graph.edges, b.graph.edges, strict=True)
        )
        assert all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a.init, b.init, strict=True))

    def test_shape(self):
        scene = build_scene(CONTAMINATED)
        assert scene.graph.n_views == 15
        assert is_connected(scene.graph)
        assert len(scene.outliers) == int(0.15 * scene.graph.n_edges)
        assert scene.statistics().rotation_rmse > 0

    def test_outlier_stage_does_not_move_inliers(self):
        clean = build_scene(replace(CONTAMINATED, outlier_fraction=0.0))
        dirty = build_scene(CONTAMINATED)
        for h, (a, b) in enumerate(zip(clean.graph.edges, dirty.graph.edges, strict=True)):
            if h not in dirty.outliers:
                assert np.array_equal(a.measurement.matrix, b.measurement.matrix)


class TestNoiselessRecovery:
    """Exact data is recovered to machine precision."""

    def test_perturbed_init_recovers_ground_truth(self):
        spec = ScenarioSpec(
            n_views=12,
            edge_density=0.5,
            rot_noise_deg=0.0,
            trans_noise=0.0,
            outlier_fraction=0.0,
            init_perturbation=0.1,
        )
        cfg = replace(ANCHORED, max_iterations=30)
        for seed in range(10):
            trial = run_trial(replace(spec, seed=seed), cfg, methods=("mcc",))
            outcome = trial.outcome("mcc")
            assert outcome.report.converged
            assert outcome.result.e_r < 1e-8
            assert outcome.result.e_t < 1e-8

    def test_both_methods_agree_without_outliers(self):
        spec = ScenarioSpec(n_views=8, edge_density=0.6, rot_noise_deg=0.0, trans_noise=0.0, outlier_fraction=0.0)
        trial = run_trial(spec, ANCHORED)
        assert [o.method for o in trial.outcomes] == ["mcc", "plain"]
        assert trial.outcome("plain").alpha is None
        for o in trial.outcomes:
            assert o.result.e_r < 1e-10
        with pytest.raises(KeyError):
            trial.outcome("fixed_weights")


class TestRobustness:
    """Behaviour on contaminated scenes."""

    def test_mcc_beats_plain(self, contaminated_runs):
        runs, _ = contaminated_runs
        assert _median(runs, "mcc") <= _median(runs, "plain")
        assert _median(runs, "mcc", "e_t") <= _median(runs, "plain", "e_t")

    def test_mcc_stays_near_noise_floor(self, contaminated_runs):
        runs, floor = contaminated_runs
        assert _median(runs, "mcc") <= 3 * _median(floor, "mcc")

    def test_outliers_get_the_smallest_weights(self, contaminated_runs):
        runs, _ = contaminated_runs
        separated = 0
        for trial in runs:
            w = np.array(trial.outcome("mcc").report.final_weights)
            inliers = [h for h in range(len(w)) if h not in trial.outliers]
            if w[sorted(trial.outliers)].max() < w[inliers].min():
                separated += 1
        assert separated >= 18

    def test_alpha_insensitivity(self):
        results = sweep_alpha(CONTAMINATED, [0.4, 0.7, 1.0, 1.5, 2.0], ANCHORED)
        errors = [t.outcome("mcc").result.e_r for t in results]
        assert [t.outcome("mcc").alpha for t in results] == [0.4, 0.7, 1.0, 1.5, 2.0]
        assert all(t.outcome("mcc").report.converged for t in results)
        assert max(errors) / min(errors) <= 2.0


class TestDrivers:
    """Sweeps, multi-seed runs and the result table."""

    def test_sweep_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            sweep_alpha(CONTAMINATED, [1.0, 0.0])

    def test_workers_preserve_order(self):
        spec = replace(CONTAMINATED, n_views=6, edge_density=0.8)
        serial = run_seeds(spec, ANCHORED, [3, 1, 2], workers=1)
        parallel = run_seeds(spec, ANCHORED, [3, 1, 2], workers=2)
        assert [t.seed for t in parallel] == [3, 1, 2]
        assert table_rows(serial) == table_rows(parallel)

    def test_table_rows(self):
        spec = replace(CONTAMINATED, n_views=6, edge_density=0.8)
        rows = table_rows(run_seeds(spec, ANCHORED, [4]))
        assert [r[:2] for r in rows] == [["4", "mcc"], ["4", "plain"]]
        assert rows[0][2] == repr(ANCHORED.alpha)
        assert rows[1][2] == ""
        assert all(r[6] == "" for r in rows)
        assert float(rows[0][4]) >= 0

    def test_table_rows_with_timing(self):
        spec = replace(CONTAMINATED, n_views=6, edge_density=0.8)
        rows = table_rows(run_seeds(spec, ANCHORED, [4], methods=("plain",)), timing=True)
        assert float(rows[0][6]) > 0

    def test_write_table(self):
        text = write_table([["0", "mcc", "1.0", "3", "0.1", "0.2", ""]], comments=["seed=0"])
        lines = text.splitlines()
        assert lines[0] == "# seed=0"
        assert lines[1] == ",".join(TABLE_COLUMNS)
        parsed = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
        assert parsed[1] == ["0", "mcc", "1.0", "3", "0.1", "0.2", ""]
        assert "\r" not in text

    def test_same_inputs_same_table(self):
        spec = replace(CONTAMINATED, n_views=6, edge_density=0.8)
        a = write_table(table_rows(run_seeds(spec, ANCHORED, [0, 1])))
        b = write_table(table_rows(run_seeds(spec, ANCHORED, [0, 1])))
        assert a == b
