"""Accuracy of estimated global motions and of measured relative motions against ground truth."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from src.core.errors import EmptyGraph, LengthMismatch
from src.graph.model import GlobalMotionSet, MotionGraph
from src.lie.se3 import compose, inverse


@dataclass(frozen=True)
class ViewError:
    e_r: float
    e_t: float


@dataclass(frozen=True)
class EvalResult:
    e_r: float
    e_t: float
    per_view: tuple[ViewError, ...]


def evaluate(est: GlobalMotionSet, gt: GlobalMotionSet) -> EvalResult:
    """Mean Frobenius rotation error and mean Euclidean translation error over views."""
    if len(est) != len(gt):
        raise LengthMismatch(len(est), len(gt))
    per_view = tuple(
        ViewError(
            e_r=float(np.linalg.norm(a.r - b.r)),
            e_t=float(np.linalg.norm(a.t - b.t)),
        )
        for a, b in zip(est, gt, strict=True)
    )
    n = len(per_view)
    return EvalResult(
        e_r=math.fsum(v.e_r for v in per_view) / n,
        e_t=math.fsum(v.e_t for v in per_view) / n,
        per_view=per_view,
    )


@dataclass(frozen=True)
class RelativeMotionStatistics:
    rotation_mean: float
    rotation_median: float
    rotation_rmse: float
    translation_mean: float
    translation_median: float
    translation_rmse: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _summary(errors: np.ndarray) -> tuple[float, float, float]:
    return (
        math.fsum(errors.tolist()) / len(errors),
        float(np.median(errors)),
        math.sqrt(math.fsum(np.square(errors).tolist()) / len(errors)),
    )


def relative_motion_statistics(g: MotionGraph, gt: GlobalMotionSet) -> RelativeMotionStatistics:
    """Error of every measured M_ij against the true M_i^-1 M_j, summarised over edges."""
    if len(gt) != g.n_views:
        raise LengthMismatch(g.n_views, len(gt))
    if g.n_edges == 0:
        raise EmptyGraph("relative motion statistics need at least one edge")

    rot = np.empty(g.n_edges)
    trans = np.empty(g.n_edges)
    for h, e in enumerate(g.edges):
        truth = compose(inverse(gt[e.i]), gt[e.j])
        rot[h] = np.linalg.norm(e.measurement.r - truth.r)
        trans[h] = np.linalg.norm(e.measurement.t - truth.t)

    r_mean, r_median, r_rmse = _summary(rot)
    t_mean, t_median, t_rmse = _summary(trans)
    return RelativeMotionStatistics(
        rotation_mean=r_mean,
        rotation_median=r_median,
        rotation_rmse=r_rmse,
        translation_mean=t_mean,
        translation_median=t_median,
        translation_rmse=t_rmse,
    )
