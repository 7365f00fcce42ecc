"""HTTP/JSON API over the run service (schema version v1).

Semantic rejections (invalid partition, duplicate worker, unknown cluster, ...)
come back as 200 with accepted=false and a reason; transport-level problems
(unknown run or task route, malformed payloads) use standard status codes.
Submissions are idempotent via client-supplied submission ids.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .engine import RunService
from .model import Item, ItemCorpus, WorkflowConfig
from .simulation import WorkerModel

API_PREFIX = "/api/v1"


class ItemIn(BaseModel):
    item_id: str
    payload: Any = None
    ground_truth_labels: Optional[dict[str, str]] = None


class CorpusIn(BaseModel):
    name: str
    items: list[ItemIn]


class ConfigIn(BaseModel):
    delta: float = 0.95
    f: int = 16
    n: Optional[int] = None
    h: int = 35
    m: int = 15
    theta: int = 5
    rng_seed: int = 0
    categorization_batch: int = 35
    pivots_per_cluster: int = 10


class LabelTreeIn(BaseModel):
    label: str
    children: list["LabelTreeIn"] = Field(default_factory=list)


class PerspectiveIn(BaseModel):
    name: str
    tree: LabelTreeIn


class WorkerModelIn(BaseModel):
    perspectives: list[PerspectiveIn]
    hierarchy_weights: list[float]
    split_probability: float = 0.5
    noise_rate: float = 0.0


class CreateRunRequest(BaseModel):
    config: ConfigIn = Field(default_factory=ConfigIn)
    corpus: CorpusIn
    mode: Literal["simulated", "live"] = "live"
    worker_model: Optional[WorkerModelIn] = None
    run_id: Optional[str] = None


class CreateRunResponse(BaseModel):
    run_id: str
    phase: str
    tau: int
    n_target: int


class TaskItem(BaseModel):
    item_id: str
    payload: Any = None


class TaskOut(BaseModel):
    task_id: str
    kind: str
    assignments_remaining: int
    items: list[TaskItem]
    pivots: Optional[dict[str, list[TaskItem]]] = None


class TaskEnvelope(BaseModel):
    task: Optional[TaskOut] = None


class ClusteringSubmission(BaseModel):
    worker_id: str
    submission_id: str
    clusters: list[list[str]]


class CategorizationSubmission(BaseModel):
    worker_id: str
    submission_id: str
    assignments: dict[str, Optional[str]]


class SubmissionResponse(BaseModel):
    accepted: bool
    reason: Optional[str] = None
    violations: Optional[list] = None
    duplicate: bool = False
    phase: str = ""
    task_status: str = ""


def create_app(service: RunService | None = None, data_dir: str | None = None) -> FastAPI:
    service = service or RunService(data_dir=data_dir)
    app = FastAPI(title="quorum", version="1.0")
    app.state.service = service

    def _run_or_404(run_id: str):
        try:
            return service.get_run(run_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")

    @app.post(f"{API_PREFIX}/runs", response_model=CreateRunResponse)
    def create_run(req: CreateRunRequest) -> CreateRunResponse:
        corpus = ItemCorpus.from_items(
            req.corpus.name,
            (Item(i.item_id, i.payload, i.ground_truth_labels) for i in req.corpus.items),
        )
        model = WorkerModel.from_dict(req.worker_model.model_dump()) if req.worker_model else None
        config = WorkflowConfig.from_dict(req.config.model_dump())
        try:
            run_id = service.start_run(config, corpus, mode=req.mode, worker_model=model, run_id=req.run_id)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        summary = service.run_summary(run_id)
        return CreateRunResponse(
            run_id=run_id, phase=summary["phase"], tau=summary["tau"], n_target=summary["n_target"]
        )

    @app.get(f"{API_PREFIX}/runs/{{run_id}}")
    def run_summary(run_id: str) -> dict:
        _run_or_404(run_id)
        return service.run_summary(run_id)

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/task", response_model=TaskEnvelope)
    def next_task(run_id: str, worker_id: str) -> TaskEnvelope:
        _run_or_404(run_id)
        task = service.get_task(run_id, worker_id)
        return TaskEnvelope(task=TaskOut(**task) if task else None)

    @app.post(f"{API_PREFIX}/runs/{{run_id}}/tasks/{{task_id}}/clustering", response_model=SubmissionResponse)
    def submit_clustering(run_id: str, task_id: str, sub: ClusteringSubmission) -> SubmissionResponse:
        _run_or_404(run_id)
        result = service.submit_clustering(run_id, task_id, sub.worker_id, sub.clusters, sub.submission_id)
        return SubmissionResponse(**result.to_dict())

    @app.post(
        f"{API_PREFIX}/runs/{{run_id}}/tasks/{{task_id}}/categorization", response_model=SubmissionResponse
    )
    def submit_categorization(run_id: str, task_id: str, sub: CategorizationSubmission) -> SubmissionResponse:
        _run_or_404(run_id)
        result = service.submit_categorization(run_id, task_id, sub.worker_id, sub.assignments, sub.submission_id)
        return SubmissionResponse(**result.to_dict())

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/report")
    def run_report(run_id: str) -> dict:
        _run_or_404(run_id)
        return service.run_report(run_id)

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/graphs")
    def clustering_graphs(run_id: str) -> dict:
        run = _run_or_404(run_id)
        with run.lock:
            return {"graphs": list(run.graph_exports)}

    console_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if console_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/console", StaticFiles(directory=str(console_dir), html=True), name="console")

    return app


app = create_app()
