"""Pytest configuration and shared fixtures."""

import math
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.graph.model import RelativeMotionEdge, build_graph
from src.lie.se3 import Motion, Twist, compose, exp_twist, inverse


def rot_z(angle: float) -> Motion:
    return exp_twist(Twist(np.array([0.0, 0.0, angle]), np.zeros(3)))


def random_motion(rng: np.random.Generator, max_angle: float = math.pi / 2, scale: float = 5.0) -> Motion:
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = rng.uniform(0.0, max_angle)
    return Motion(exp_twist(Twist(axis * angle, np.zeros(3))).r, rng.uniform(-scale, scale, size=3))


def consistent_graph(gt, pairs):
    edges = [RelativeMotionEdge(i, j, compose(inverse(gt[i]), gt[j])) for i, j in pairs]
    return build_graph(len(gt), edges)


@pytest.fixture
def temp_directory():
    """
    Create a temporary directory for tests that need filesystem access.
    Automatically cleaned up after test completes.
    """
    dir_path = tempfile.mkdtemp()
    yield Path(dir_path)
    shutil.rmtree(dir_path, ignore_errors=True)


@pytest.fixture
def rng():
    """Seeded generator so property loops are reproducible."""
    return np.random.Generator(np.random.PCG64(20240611))


@pytest.fixture
def ground_truth(rng):
    """Six views, view 0 at identity."""
    from src.graph.model import GlobalMotionSet

    return GlobalMotionSet((Motion.identity(), *(random_motion(rng) for _ in range(5))))


@pytest.fixture
def complete_graph(ground_truth):
    """Exactly consistent graph over every view pair of `ground_truth`."""
    n = len(ground_truth)
    return consistent_graph(ground_truth, [(i, j) for i in range(n) for j in range(i + 1, n)])


@pytest.fixture
def chain_g2o():
    """Chain 0-1-2 with unit x translations, one comment and an information block."""
    info = " ".join(["1"] + ["0"] * 5 + ["1"] + ["0"] * 4 + ["1"] + ["0"] * 3 + ["1", "0", "0", "1", "0", "1"])
    return (
        "# chain\n"
        "EDGE_SE3:QUAT 0 1 1 0 0 0 0 0 1\n"
        "\n"
        f"EDGE_SE3:QUAT 1 2 1 0 0 0 0 0 1 {info}\n"
    )
