"""
JSON documents: motion graphs with optional globals and solver report,
evaluation results and outlier labels.

Floats are written in shortest round-trip form, so parse(write(x)) is exact.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.core.config import settings
from src.core.errors import GraphError, SchemaError
from src.graph.model import GlobalMotionSet, MotionGraph, RelativeMotionEdge, build_graph
from src.lie.se3 import Motion, validate_motion

if TYPE_CHECKING:
    from src.averaging.solver import SolveReport
    from src.bench.metrics import EvalResult, RelativeMotionStatistics


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class MotionModel(_Strict):
    r: list[float] = Field(min_length=9, max_length=9)
    t: list[float] = Field(min_length=3, max_length=3)

    @classmethod
    def of(cls, m: Motion) -> MotionModel:
        return cls(r=m.r.reshape(-1).tolist(), t=m.t.tolist())

    def to_motion(self) -> Motion:
        return Motion(np.array(self.r).reshape(3, 3), np.array(self.t))


class EdgeModel(_Strict):
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    r: list[float] = Field(min_length=9, max_length=9)
    t: list[float] = Field(min_length=3, max_length=3)
    weight: float = 1.0

    def to_motion(self) -> Motion:
        return Motion(np.array(self.r).reshape(3, 3), np.array(self.t))


class IterationModel(_Strict):
    iteration: int = Field(ge=1)
    residual_error: float
    sigma: float | None = None
    max_update: float
    objective: float
    weights: list[float]


class ReportModel(_Strict):
    mode: str
    iterations_run: int = Field(ge=0)
    termination: str
    records: list[IterationModel]
    final_weights: list[float]
    runtime_s: float | None = None


class GraphDocument(_Strict):
    n_views: int = Field(ge=1)
    edges: list[EdgeModel]
    globals_: list[MotionModel] | None = Field(default=None, alias="globals")
    report: ReportModel | None = None


class ViewErrorModel(_Strict):
    view: int
    e_r: float
    e_t: float


class EvalDocument(_Strict):
    e_r: float = Field(ge=0)
    e_t: float = Field(ge=0)
    per_view: list[ViewErrorModel]


class StatisticsModel(_Strict):
    rotation_mean: float
    rotation_median: float
    rotation_rmse: float
    translation_mean: float
    translation_median: float
    translation_rmse: float


class LabelsDocument(_Strict):
    seed: int
    outliers: list[int]
    statistics: StatisticsModel | None = None


def _schema_error(e: ValidationError) -> SchemaError:
    first = e.errors()[0]
    path = ".".join(str(p) for p in first["loc"]) or "$"
    return SchemaError(path, first["msg"])


def _load(model: type[BaseModel], text: str):
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise _schema_error(e) from None


def report_model(report: SolveReport, include_runtime: bool = False) -> ReportModel:
    return ReportModel(
        mode=report.mode,
        iterations_run=report.iterations_run,
        termination=report.termination,
        records=[
            IterationModel(
                iteration=r.iteration,
                residual_error=r.residual_error,
                sigma=r.sigma,
                max_update=r.max_update,
                objective=r.objective,
                weights=list(r.weights),
            )
            for r in report.records
        ],
        final_weights=list(report.final_weights),
        runtime_s=report.runtime_s if include_runtime else None,
    )


def _report_from_model(doc: ReportModel) -> SolveReport:
    from src.averaging.solver import IterationRecord, SolveReport

    if doc.iterations_run != len(doc.records):
        raise SchemaError("report.iterations_run", "does not match the number of records")
    return SolveReport(
        mode=doc.mode,
        records=[
            IterationRecord(
                iteration=r.iteration,
                residual_error=r.residual_error,
                sigma=r.sigma,
                max_update=r.max_update,
                objective=r.objective,
                weights=tuple(r.weights),
            )
            for r in doc.records
        ],
        final_weights=tuple(doc.final_weights),
        termination=doc.termination,
        runtime_s=doc.runtime_s or 0.0,
    )


def write_json(
    graph: MotionGraph,
    globals_: GlobalMotionSet | None = None,
    report: SolveReport | None = None,
    *,
    include_runtime: bool = False,
) -> str:
    doc = GraphDocument(
        n_views=graph.n_views,
        edges=[
            EdgeModel(
                i=e.i,
                j=e.j,
                r=e.measurement.r.reshape(-1).tolist(),
                t=e.measurement.t.tolist(),
                weight=e.weight,
            )
            for e in graph.edges
        ],
        globals_=[MotionModel.of(m) for m in globals_] if globals_ is not None else None,
        report=report_model(report, include_runtime) if report is not None else None,
    )
    return doc.model_dump_json(indent=2, by_alias=True, exclude_none=True) + "\n"


def parse_json(text: str) -> tuple[MotionGraph, GlobalMotionSet | None, SolveReport | None]:
    """Parse a graph document; schema violations name the offending field path."""
    doc: GraphDocument = _load(GraphDocument, text)

    edges = [RelativeMotionEdge(e.i, e.j, e.to_motion(), e.weight) for e in doc.edges]
    try:
        graph = build_graph(doc.n_views, edges)
    except GraphError as e:
        path = f"edges.{e.edge}" if e.edge is not None else "edges"
        raise SchemaError(path, str(e)) from None

    globals_: GlobalMotionSet | None = None
    if doc.globals_ is not None:
        if len(doc.globals_) != doc.n_views:
            raise SchemaError(
                "globals", f"expected {doc.n_views} motions, got {len(doc.globals_)}"
            )
        motions = []
        for k, item in enumerate(doc.globals_):
            m = item.to_motion()
            check = validate_motion(m, settings.motion_tolerance)
            if not check.ok:
                raise SchemaError(f"globals.{k}", f"invalid motion: {check.reason}")
            motions.append(m)
        globals_ = GlobalMotionSet(tuple(motions))

    report = _report_from_model(doc.report) if doc.report is not None else None
    return graph, globals_, report


def write_eval_json(result: EvalResult) -> str:
    doc = EvalDocument(
        e_r=result.e_r,
        e_t=result.e_t,
        per_view=[ViewErrorModel(view=k, e_r=v.e_r, e_t=v.e_t) for k, v in enumerate(result.per_view)],
    )
    return doc.model_dump_json(indent=2) + "\n"


def parse_eval_json(text: str) -> EvalDocument:
    return _load(EvalDocument, text)


def write_labels_json(
    seed: int, outliers: set[int] | frozenset[int], statistics: RelativeMotionStatistics | None = None
) -> str:
    doc = LabelsDocument(
        seed=seed,
        outliers=sorted(outliers),
        statistics=StatisticsModel(**statistics.as_dict()) if statistics is not None else None,
    )
    return doc.model_dump_json(indent=2, exclude_none=True) + "\n"


def parse_labels_json(text: str) -> LabelsDocument:
    return _load(LabelsDocument, text)


def write_report_json(report: SolveReport, *, include_runtime: bool = False) -> str:
    return report_model(report, include_runtime).model_dump_json(indent=2, exclude_none=True) + "\n"
