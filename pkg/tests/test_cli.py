"""Tests for the command-line interface."""

import json

import pytest

from cli.commands.base import EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK
from cli.core.config import CLIConfig
from cli.core.files import atomic_write_all
from cli.main import build_parser, main
from src.graph.documents import parse_labels_json

SMALL_SCENE = ["--views", "6", "--density", "0.8", "--seed", "3"]


def _synth(out, *extra):
    return main(["synth", *SMALL_SCENE, "--out", str(out), *extra])


class TestParser:
    """Argument parsing."""

    def test_help_shows_defaults(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "0.4,0.7,1.0,1.5,2.0" in out
        assert "default" in out
        assert "often reaches the iteration cap" in " ".join(out.split())

    def test_subcommands_registered(self):
        _, commands = build_parser(CLIConfig())
        assert set(commands) == {"average", "synth", "sweep", "compare", "eval"}

    def test_usage_error_exits_with_one(self):
        with pytest.raises(SystemExit) as exc:
            main(["average"])
        assert exc.value.code == EXIT_ERROR

    def test_unknown_format_is_rejected(self, temp_directory):
        with pytest.raises(SystemExit) as exc:
            main(["average", str(temp_directory / "g.g2o"), "--format", "ply"])
        assert exc.value.code == EXIT_ERROR


class TestSynth:
    """synth writes graph, ground truth and labels."""

    def test_writes_files(self, temp_directory):
        assert _synth(temp_directory) == EXIT_OK
        assert (temp_directory / "graph.json").exists()
        assert (temp_directory / "ground_truth.json").exists()
        labels = parse_labels_json((temp_directory / "labels.json").read_text())
        assert labels.seed == 3
        assert labels.statistics is not None

    def test_byte_identical_reruns(self, temp_directory):
        a, b = temp_directory / "a", temp_directory / "b"
        assert _synth(a, "--format", "g2o") == EXIT_OK
        assert _synth(b, "--format", "g2o") == EXIT_OK
        for name in ("graph.g2o", "ground_truth.g2o", "labels.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_no_outliers_gives_empty_labels(self, temp_directory):
        assert _synth(temp_directory, "--outliers", "0") == EXIT_OK
        labels = json.loads((temp_directory / "labels.json").read_text())
        assert labels["outliers"] == []

    def test_single_view_is_an_error(self, temp_directory):
        assert main(["synth", "--views", "1", "--out", str(temp_directory)]) == EXIT_ERROR
        assert not (temp_directory / "graph.json").exists()

    def test_failed_write_leaves_no_files(self, temp_directory):
        (temp_directory / "labels.json").mkdir()
        assert _synth(temp_directory) == EXIT_ERROR
        assert not (temp_directory / "graph.json").exists()
        assert not (temp_directory / "ground_truth.json").exists()
        assert [p.name for p in temp_directory.iterdir()] == ["labels.json"]

    def test_output_format_from_environment(self, temp_directory, monkeypatch):
        monkeypatch.setenv("MCC_OUTPUT_FORMAT", "g2o")
        monkeypatch.setattr("cli.core.config._config", None)
        assert _synth(temp_directory) == EXIT_OK
        assert (temp_directory / "graph.g2o").exists()

    def test_unknown_output_format_in_environment(self, temp_directory, monkeypatch):
        monkeypatch.setenv("MCC_OUTPUT_FORMAT", "xml")
        monkeypatch.setattr("cli.core.config._config", None)
        assert _synth(temp_directory) == EXIT_ERROR
        assert list(temp_directory.iterdir()) == []


class TestAverage:
    """average on files."""

    def test_consistent_g2o(self, temp_directory):
        path = temp_directory / "chain.g2o"
        path.write_text(
            "EDGE_SE3:QUAT 0 1 1 0 0 0 0 0 1\n"
            "EDGE_SE3:QUAT 1 2 1 0 0 0 0 0 1\n"
            "EDGE_SE3:QUAT 0 2 2 0 0 0 0 0 1\n"
        )
        assert main(["average", str(path)]) == EXIT_OK
        out = temp_directory / "chain.averaged.g2o"
        assert out.exists()
        assert out.read_text().count("VERTEX_SE3:QUAT") == 3
        report = json.loads((temp_directory / "chain.averaged.report.json").read_text())
        assert report["termination"] == "converged"
        assert report["mode"] == "mcc"
        assert "runtime_s" not in report

    def test_synth_then_average_then_eval(self, temp_directory, capsys):
        assert _synth(temp_directory, "--outliers", "0", "--rot-noise", "0", "--trans-noise", "0") == EXIT_OK
        estimate = temp_directory / "estimate.json"
        status = main(
            ["average", str(temp_directory / "graph.json"), "-o", str(estimate), "--gauge", "anchor", "--timing"]
        )
        assert status == EXIT_OK
        assert "runtime_s" in json.loads((temp_directory / "estimate.report.json").read_text())

        capsys.readouterr()
        assert main(["eval", str(estimate), str(temp_directory / "ground_truth.json")]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["e_r"] < 1e-8
        assert result["e_t"] < 1e-8

    def test_iteration_cap_exits_with_two(self, temp_directory):
        assert _synth(temp_directory) == EXIT_OK
        status = main(["average", str(temp_directory / "graph.json"), "--max-iterations", "1"])
        assert status == EXIT_NOT_CONVERGED
        report = json.loads((temp_directory / "graph.averaged.report.json").read_text())
        assert report["termination"] == "max_iterations"
        assert report["iterations_run"] == 1

    def test_disconnected_graph(self, temp_directory):
        path = temp_directory / "split.g2o"
        path.write_text("EDGE_SE3:QUAT 0 1 1 0 0 0 0 0 1\nEDGE_SE3:QUAT 2 3 1 0 0 0 0 0 1\n")
        assert main(["average", str(path)]) == EXIT_ERROR
        assert not (temp_directory / "split.averaged.g2o").exists()

    def test_malformed_input(self, temp_directory):
        path = temp_directory / "bad.g2o"
        path.write_text("EDGE_SE3:QUAT 0 1 1 0 0\n")
        assert main(["average", str(path)]) == EXIT_ERROR

    def test_unknown_extension(self, temp_directory):
        path = temp_directory / "graph.txt"
        path.write_text("EDGE_SE3:QUAT 0 1 1 0 0 0 0 0 1\n")
        assert main(["average", str(path)]) == EXIT_ERROR
        assert main(["average", str(path), "--format", "g2o"]) == EXIT_OK

    def test_missing_file(self, temp_directory):
        assert main(["average", str(temp_directory / "nope.json")]) == EXIT_ERROR

    def test_mcc_fits_inliers_better_than_plain(self, temp_directory):
        assert main(["synth", "--seed", "1", "--out", str(temp_directory)]) == EXIT_OK
        graph = str(temp_directory / "graph.json")
        final_error = {}
        for method in ("mcc", "plain"):
            out = temp_directory / f"{method}.json"
            status = main(["average", graph, "--method", method, "--gauge", "anchor", "-o", str(out)])
            assert status in (EXIT_OK, EXIT_NOT_CONVERGED)
            report = json.loads((temp_directory / f"{method}.report.json").read_text())
            final_error[method] = report["records"][-1]["residual_error"]
        assert final_error["mcc"] <= final_error["plain"]

    def test_outputs_are_written_together(self, temp_directory):
        path = temp_directory / "pair.g2o"
        path.write_text("EDGE_SE3:QUAT 0 1 1 0 0 0 0 0 1\n")
        (temp_directory / "pair.averaged.report.json").mkdir()
        assert main(["average", str(path)]) == EXIT_ERROR
        assert not (temp_directory / "pair.averaged.g2o").exists()


class TestEval:
    """eval compares two global motion files."""

    def test_same_file_is_zero(self, temp_directory, capsys):
        assert _synth(temp_directory) == EXIT_OK
        truth = str(temp_directory / "ground_truth.json")
        capsys.readouterr()
        assert main(["eval", truth, truth]) == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["e_r"] == 0.0
        assert result["e_t"] == 0.0
        assert len(result["per_view"]) == 6

    def test_view_count_mismatch(self, temp_directory):
        a, b = temp_directory / "a", temp_directory / "b"
        assert _synth(a) == EXIT_OK
        assert main(["synth", "--views", "7", "--out", str(b)]) == EXIT_OK
        assert main(["eval", str(a / "ground_truth.json"), str(b / "ground_truth.json")]) == EXIT_ERROR

    def test_graph_without_globals(self, temp_directory):
        assert _synth(temp_directory) == EXIT_OK
        graph = str(temp_directory / "graph.json")
        assert main(["eval", graph, str(temp_directory / "ground_truth.json")]) == EXIT_ERROR


class TestExperiments:
    """sweep and compare tables."""

    def test_sweep_single_alpha(self, capsys):
        argv = ["sweep", *SMALL_SCENE, "--alphas", "1.0", "--gauge", "anchor", "--max-iterations", "100"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "# seed=3"
        assert lines[1] == "seed,method,alpha,iterations,e_R,e_t,runtime"
        assert len(lines) == 3
        assert lines[2].startswith("3,mcc,1.0,")

    def test_sweep_malformed_alpha(self, capsys):
        assert main(["sweep", *SMALL_SCENE, "--alphas", "1.0,abc"]) == EXIT_ERROR
        assert capsys.readouterr().out == ""

    def test_sweep_to_file(self, temp_directory):
        out = temp_directory / "sweep.csv"
        main(["sweep", *SMALL_SCENE, "--alphas", "0.5,1.0", "--out", str(out)])
        assert len(out.read_text().splitlines()) == 4

    def test_compare(self, capsys):
        status = main(["compare", *SMALL_SCENE, "--seeds", "2", "--gauge", "anchor"])
        assert status == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "# seeds=3..4"
        methods = [line.split(",")[1] for line in lines[2:]]
        assert methods == ["mcc", "plain", "mcc", "plain"]

    def test_compare_rejects_unknown_method(self):
        assert main(["compare", *SMALL_SCENE, "--seeds", "1", "--methods", "mcc,huber"]) == EXIT_ERROR


class TestConfig:
    """CLI configuration and file output."""

    def test_rejects_unknown_output_format(self):
        with pytest.raises(ValueError, match="xml"):
            CLIConfig(output_format="xml")

    def test_rejects_bad_worker_count(self, monkeypatch):
        monkeypatch.setenv("MCC_WORKERS", "many")
        with pytest.raises(ValueError, match="MCC_WORKERS"):
            CLIConfig.from_env()

    def test_atomic_write_all(self, temp_directory):
        files = {temp_directory / "a.txt": "a\n", temp_directory / "sub" / "b.txt": "b\n"}
        atomic_write_all(files)
        assert (temp_directory / "a.txt").read_text() == "a\n"
        assert (temp_directory / "sub" / "b.txt").read_text() == "b\n"

    def test_atomic_write_all_rolls_back(self, temp_directory):
        (temp_directory / "blocked").mkdir()
        files = {temp_directory / "first.txt": "1\n", temp_directory / "blocked": "2\n"}
        with pytest.raises(OSError):
            atomic_write_all(files)
        assert sorted(p.name for p in temp_directory.iterdir()) == ["blocked"]
