"""Thin HTTP client for the run service, plus the simulated-crowd driver that
answers tasks through the same API path human workers use.
"""

from __future__ import annotations

import httpx

from .api import API_PREFIX, create_app
from .engine import RunService
from .model import Item, ItemCorpus, Sample, WorkflowConfig
from .simulation import (
    WorkerModel,
    simulate_categorization_vote,
    simulate_worker_clustering,
    worker_rng,
)


class ApiClient:
    """Calls the versioned JSON API; works against a remote server or an
    in-process app (ASGI transport)."""

    def __init__(self, base_url: str = "http://service", http: httpx.Client | None = None):
        self.base_url = base_url.rstrip("/")
        self.http = http or httpx.Client(base_url=self.base_url, timeout=60.0)

    @classmethod
    def in_process(cls, service: RunService | None = None) -> "ApiClient":
        """Client bound to an in-process app instance (no socket), so simulated
        runs exercise the same HTTP handlers as live workers."""
        from fastapi.testclient import TestClient

        app = create_app(service=service)
        return cls(http=TestClient(app, base_url="http://service"))

    def _url(self, path: str) -> str:
        return f"{API_PREFIX}{path}"

    def create_run(
        self,
        config: WorkflowConfig,
        corpus: ItemCorpus,
        mode: str = "live",
        worker_model: WorkerModel | None = None,
        run_id: str | None = None,
    ) -> dict:
        payload = {
            "config": config.to_dict(),
            "corpus": {
                "name": corpus.name,
                "items": [corpus.items[i].to_dict() for i in sorted(corpus.items)],
            },
            "mode": mode,
            "worker_model": worker_model.to_dict() if worker_model else None,
            "run_id": run_id,
        }
        r = self.http.post(self._url("/runs"), json=payload)
        r.raise_for_status()
        return r.json()

    def summary(self, run_id: str) -> dict:
        r = self.http.get(self._url(f"/runs/{run_id}"))
        r.raise_for_status()
        return r.json()

    def get_task(self, run_id: str, worker_id: str) -> dict | None:
        r = self.http.get(self._url(f"/runs/{run_id}/task"), params={"worker_id": worker_id})
        r.raise_for_status()
        return r.json()["task"]

    def submit_clustering(
        self, run_id: str, task_id: str, worker_id: str, clusters: list[list[str]], submission_id: str
    ) -> dict:
        r = self.http.post(
            self._url(f"/runs/{run_id}/tasks/{task_id}/clustering"),
            json={"worker_id": worker_id, "submission_id": submission_id, "clusters": clusters},
        )
        r.raise_for_status()
        return r.json()

    def submit_categorization(
        self, run_id: str, task_id: str, worker_id: str, assignments: dict, submission_id: str
    ) -> dict:
        r = self.http.post(
            self._url(f"/runs/{run_id}/tasks/{task_id}/categorization"),
            json={"worker_id": worker_id, "submission_id": submission_id, "assignments": assignments},
        )
        r.raise_for_status()
        return r.json()

    def report(self, run_id: str) -> dict:
        r = self.http.get(self._url(f"/runs/{run_id}/report"))
        r.raise_for_status()
        return r.json()


class LocalClient:
    """Same surface as ApiClient, addressing a RunService in this process
    directly. Used where the HTTP layer would only add serialization weight
    (bulk experiments); the handlers call these exact service methods."""

    def __init__(self, service: RunService | None = None):
        self.service = service or RunService()

    def create_run(self, config, corpus, mode="live", worker_model=None, run_id=None) -> dict:
        rid = self.service.start_run(config, corpus, mode=mode, worker_model=worker_model, run_id=run_id)
        summary = self.service.run_summary(rid)
        return {"run_id": rid, "phase": summary["phase"], "tau": summary["tau"], "n_target": summary["n_target"]}

    def summary(self, run_id: str) -> dict:
        return self.service.run_summary(run_id)

    def get_task(self, run_id: str, worker_id: str) -> dict | None:
        return self.service.get_task(run_id, worker_id)

    def submit_clustering(self, run_id, task_id, worker_id, clusters, submission_id) -> dict:
        return self.service.submit_clustering(run_id, task_id, worker_id, clusters, submission_id).to_dict()

    def submit_categorization(self, run_id, task_id, worker_id, assignments, submission_id) -> dict:
        return self.service.submit_categorization(run_id, task_id, worker_id, assignments, submission_id).to_dict()

    def report(self, run_id: str) -> dict:
        return self.service.run_report(run_id)


def drive_simulated_run(
    client: "ApiClient | LocalClient",
    run_id: str,
    corpus: ItemCorpus,
    model: WorkerModel,
    seed: int,
    max_steps: int = 1_000_000,
) -> dict:
    """Answer every open task with simulated workers until the run finishes.
    One fresh worker per assignment; each worker's randomness derives from the
    run seed and its id, so the whole run is reproducible."""
    counter = 0
    for _ in range(max_steps):
        state = client.summary(run_id)
        if state["phase"] == "done":
            return client.report(run_id)
        counter += 1
        worker_id = f"sim-{counter}"
        task = client.get_task(run_id, worker_id)
        if task is None:
            raise RuntimeError(f"run {run_id} is not done but offers no task")
        rng = worker_rng(seed, worker_id)
        if task["kind"] == "clustering":
            sample = Sample(
                sample_id=task["task_id"],
                items={x["item_id"] for x in task["items"]},
                kernel=set(),
                iteration=1,
            )
            clustering = simulate_worker_clustering(model, sample, corpus, rng, worker_id=worker_id)
            result = client.submit_clustering(
                run_id,
                task["task_id"],
                worker_id,
                [sorted(c) for c in clustering.clusters],
                submission_id=f"{run_id}:{task['task_id']}:{worker_id}",
            )
        else:
            pivots = {cid: [x["item_id"] for x in members] for cid, members in (task["pivots"] or {}).items()}
            assignments = {}
            for entry in task["items"]:
                item: Item = corpus.items[entry["item_id"]]
                assignments[item.item_id] = simulate_categorization_vote(model, item, pivots, corpus, rng)
            result = client.submit_categorization(
                run_id,
                task["task_id"],
                worker_id,
                assignments,
                submission_id=f"{run_id}:{task['task_id']}:{worker_id}",
            )
        if not result["accepted"]:
            raise RuntimeError(f"simulated submission rejected: {result['reason']}")
    raise RuntimeError("simulation did not converge")


def run_simulation(
    config: WorkflowConfig,
    corpus: ItemCorpus,
    model: WorkerModel,
    client: "ApiClient | LocalClient | None" = None,
    run_id: str | None = None,
) -> dict:
    """Create a simulated run and drive it to completion; returns the report."""
    client = client or ApiClient.in_process()
    created = client.create_run(config, corpus, mode="simulated", worker_model=model, run_id=run_id)
    return drive_simulated_run(client, created["run_id"], corpus, model, seed=config.rng_seed)
