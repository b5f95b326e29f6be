"""Hamilton quaternions (x, y, z, w order, scalar last) at the file-format boundary."""

from __future__ import annotations

import numpy as np
from scipy.spatial.transform import Rotation

from src.core.config import settings


def quaternion_norm_error(q) -> float:
    return abs(float(np.linalg.norm(np.asarray(q, dtype=np.float64))) - 1.0)


def quaternion_to_rotation(q, tol: float | None = None) -> np.ndarray:
    """
    Rotation matrix of a (near) unit quaternion.

    Raises ValueError when | ||q|| - 1 | exceeds tol; within tolerance the
    quaternion is normalized.
    """
    tol = settings.quaternion_tolerance if tol is None else tol
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (4,) or not np.all(np.isfinite(q)):
        raise ValueError(f"quaternion must be 4 finite numbers, got {q.tolist()}")
    err = quaternion_norm_error(q)
    if err > tol:
        raise ValueError(f"quaternion norm {np.linalg.norm(q):.12g} deviates from 1 by more than {tol:g}")
    return Rotation.from_quat(q / np.linalg.norm(q)).as_matrix()


def canonical_quaternion(q) -> np.ndarray:
    """Pick the sign with qw > 0; when qw == 0 the first nonzero component is positive."""
    q = np.asarray(q, dtype=np.float64).copy()
    if q[3] < 0:
        return -q
    if q[3] == 0:
        for c in q[:3]:
            if c != 0:
                return -q if c < 0 else q
    return q


def rotation_to_quaternion(r) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    return canonical_quaternion(Rotation.from_matrix(r).as_quat())
