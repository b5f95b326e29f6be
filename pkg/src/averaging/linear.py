"""
The linearised motion-averaging system.

For edge h between views (i, j) with weight w, the 6-row band h of D holds
-w*I6 in block column i and +w*I6 in block column j, and the right-hand side
holds w * vec(log(M_i M_ij M_j^-1)). Constant stacks [c; c; ...; c] lie in the
null space of D, which is the gauge freedom.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import lsmr

from src.core.config import settings
from src.core.errors import AngleNearPi, RankDeficientBeyondGauge
from src.graph.model import GlobalMotionSet, MotionGraph, check_lengths
from src.lie.se3 import compose, inverse, log_motion

BLOCK = 6


@dataclass(frozen=True, eq=False)
class LinearSystem:
    d: csr_matrix
    rhs: np.ndarray
    pairs: np.ndarray  # (H, 2) view indices per band

    @property
    def n_views(self) -> int:
        return self.d.shape[1] // BLOCK

    @property
    def n_edges(self) -> int:
        return self.d.shape[0] // BLOCK

    def band(self, h: int) -> np.ndarray:
        return self.d[BLOCK * h : BLOCK * (h + 1)].toarray()


def build_linear_system(
    g: MotionGraph,
    globals_: GlobalMotionSet,
    weights: np.ndarray | None = None,
) -> LinearSystem:
    check_lengths(g, globals_)
    w = g.weights if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (g.n_edges,):
        raise ValueError(f"expected {g.n_edges} weights, got shape {w.shape}")

    n_rows = BLOCK * g.n_edges
    rows = np.empty(2 * n_rows, dtype=np.int64)
    cols = np.empty(2 * n_rows, dtype=np.int64)
    data = np.empty(2 * n_rows)
    rhs = np.zeros(n_rows)
    offsets = np.arange(BLOCK)

    for h, e in enumerate(g.edges):
        residual = compose(compose(globals_[e.i], e.measurement), inverse(globals_[e.j]))
        try:
            dv = log_motion(residual).vector
        except AngleNearPi as err:
            raise AngleNearPi(err.angle, err.guard, edge=h) from None

        band = slice(2 * BLOCK * h, 2 * BLOCK * (h + 1))
        rows[band] = np.tile(BLOCK * h + offsets, 2)
        cols[band] = np.concatenate([BLOCK * e.i + offsets, BLOCK * e.j + offsets])
        data[band] = np.concatenate([np.full(BLOCK, -w[h]), np.full(BLOCK, w[h])])
        rhs[BLOCK * h : BLOCK * (h + 1)] = w[h] * dv

    d = coo_matrix((data, (rows, cols)), shape=(n_rows, BLOCK * g.n_views)).tocsr()
    pairs = np.array([(e.i, e.j) for e in g.edges], dtype=np.int64).reshape(-1, 2)
    return LinearSystem(d=d, rhs=rhs, pairs=pairs)


def _graph_rank(sys: LinearSystem) -> int:
    n = sys.n_views
    adj = coo_matrix(
        (np.ones(len(sys.pairs)), (sys.pairs[:, 0], sys.pairs[:, 1])), shape=(n, n)
    )
    n_components, _ = connected_components(adj, directed=False)
    return BLOCK * (n - n_components)


def solve_min_norm(sys: LinearSystem, *, dense_max_columns: int | None = None) -> np.ndarray:
    """
    Minimum-norm least-squares solution D^+ rhs, returned as one twist per row (N, 6).

    Up to `dense_max_columns` unknowns this is an SVD-based solve whose
    effective rank uses the cutoff max(rows, cols) * eps * s_max; larger systems
    use LSMR from a zero start, which converges to the same minimum-norm point.
    """
    limit = settings.dense_solve_max_columns if dense_max_columns is None else dense_max_columns
    n = sys.n_views
    n_cols = BLOCK * n
    required = BLOCK * (n - 1)

    if sys.d.shape[0] == 0:
        if n <= 1:
            return np.zeros((n, BLOCK))
        raise RankDeficientBeyondGauge(0, required)

    if n_cols <= limit:
        a = sys.d.toarray()
        cond = max(a.shape) * np.finfo(np.float64).eps
        x, _, rank, _ = scipy.linalg.lstsq(a, sys.rhs, cond=cond, lapack_driver="gelsd")
        if rank < required:
            raise RankDeficientBeyondGauge(int(rank), required)
    else:
        rank = _graph_rank(sys)
        if rank < required:
            raise RankDeficientBeyondGauge(rank, required)
        x = lsmr(sys.d, sys.rhs, atol=1e-14, btol=1e-14, maxiter=20 * n_cols)[0]

    return np.asarray(x).reshape(n, BLOCK)
