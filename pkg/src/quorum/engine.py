"""Run orchestration: task lifecycle, consensus pipeline wiring, event-sourced
persistence and crash recovery.

All state mutations for a run happen under its single writer lock, triggered by
accepted submissions. Accepted events append to a JSONL log; replaying the log
against a fresh service reproduces the identical run (the run seed drives every
random draw, and draws happen at deterministic points of event processing).
Snapshots of the full state are written at phase transitions for inspection;
recovery itself always replays the log.
"""

from __future__ import annotations

import json
import math
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Any

from . import consensus, frontier as frontier_mod, merging, metrics as metrics_mod, sampling
from .model import (
    Clustering,
    Frontier,
    Hierarchy,
    ItemCorpus,
    Sample,
    WorkflowConfig,
    validate_clustering,
    validate_hierarchy,
)
from .simulation import Perspective, WorkerModel

PHASES = ("planning", "clustering", "frontier-selection", "categorization", "done")


@dataclass
class Task:
    task_id: str
    kind: str  # "clustering" | "categorization"
    item_ids: list[str]
    assignments_remaining: int
    sample_id: str | None = None
    iteration: int | None = None
    pivots: dict[str, list[str]] | None = None
    answered_by: set[str] = field(default_factory=set)
    status: str = "open"  # "open" | "complete"

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "kind": self.kind,
            "item_ids": list(self.item_ids),
            "assignments_remaining": self.assignments_remaining,
            "sample_id": self.sample_id,
            "iteration": self.iteration,
            "pivots": self.pivots,
            "answered_by": sorted(self.answered_by),
            "status": self.status,
        }


@dataclass
class SubmissionResult:
    accepted: bool
    reason: str | None = None
    violations: list[dict] | None = None
    duplicate: bool = False
    phase: str = ""
    task_status: str = ""

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "violations": self.violations,
            "duplicate": self.duplicate,
            "phase": self.phase,
            "task_status": self.task_status,
        }


@dataclass
class RunState:
    run_id: str
    config: WorkflowConfig
    corpus: ItemCorpus
    mode: str  # "simulated" | "live"
    worker_model: WorkerModel | None
    rng: Random
    n_target: int = 0
    tau: int = 0
    phase: str = "planning"
    iteration: int = 0
    hierarchy: Hierarchy | None = None
    tasks: dict[str, Task] = field(default_factory=dict)
    task_order: list[str] = field(default_factory=list)
    samples: dict[str, Sample] = field(default_factory=dict)
    response_log: list[dict] = field(default_factory=list)
    retained: list[Clustering] = field(default_factory=list)
    clique_ambiguous: bool = False  # some response sat in several maximal cliques
    frontier_result: frontier_mod.FrontierLikelihood | None = None
    split_stats: frontier_mod.SplitStats | None = None
    frontier_order: list[str] = field(default_factory=list)
    pivots: dict[str, list[str]] = field(default_factory=dict)
    responses_dropped: int = 0
    covered_at_frontier: int = 0
    votes: dict[str, list[str | None]] = field(default_factory=dict)
    assignment: dict[str, str] = field(default_factory=dict)
    uncategorizable: list[str] = field(default_factory=list)
    clustering_assignments: int = 0
    categorization_assignments: int = 0
    iterations_completed: int = 0
    merge_trace: list[dict] = field(default_factory=list)
    graph_exports: list[dict] = field(default_factory=list)
    submission_results: dict[str, SubmissionResult] = field(default_factory=dict)
    task_counter: int = 0
    lock: threading.RLock = field(default_factory=threading.RLock)

    def new_task_id(self) -> str:
        self.task_counter += 1
        return f"task-{self.task_counter}"

    def open_tasks(self) -> list[Task]:
        return [self.tasks[tid] for tid in self.task_order if self.tasks[tid].status == "open"]

    def clustering_tasks_of_iteration(self, iteration: int) -> list[Task]:
        return [
            self.tasks[tid]
            for tid in self.task_order
            if self.tasks[tid].kind == "clustering" and self.tasks[tid].iteration == iteration
        ]


class RunService:
    """Owns all runs. `data_dir`, when given, receives one directory per run
    with an append-only `events.jsonl` and phase-transition `snapshot.json`."""

    def __init__(self, data_dir: str | Path | None = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.runs: dict[str, RunState] = {}
        self._registry_lock = threading.Lock()
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._recover()

    # ---- lifecycle -------------------------------------------------------

    def start_run(
        self,
        config: WorkflowConfig,
        corpus: ItemCorpus,
        mode: str = "live",
        worker_model: WorkerModel | None = None,
        run_id: str | None = None,
    ) -> str:
        config.validate()
        if mode not in ("simulated", "live"):
            raise ValueError("mode must be 'simulated' or 'live'")
        with self._registry_lock:
            if run_id is not None and run_id in self.runs:
                return run_id  # idempotent creation
            rid = run_id or uuid.uuid4().hex[:12]
            event = {
                "type": "run_created",
                "run_id": rid,
                "config": config.to_dict(),
                "corpus": corpus.to_dict(),
                "mode": mode,
                "worker_model": worker_model.to_dict() if worker_model else None,
            }
            run = self._apply_run_created(event)
            self.runs[rid] = run
        self._append_event(run, event)
        self._snapshot(run)
        return rid

    def _apply_run_created(self, event: dict) -> RunState:
        config = WorkflowConfig.from_dict(event["config"])
        corpus = ItemCorpus.from_dict(event["corpus"])
        model = WorkerModel.from_dict(event["worker_model"]) if event.get("worker_model") else None
        run = RunState(
            run_id=event["run_id"],
            config=config,
            corpus=corpus,
            mode=event["mode"],
            worker_model=model,
            rng=Random(config.rng_seed),
        )
        solved = config.n if config.n is not None else sampling.solve_sample_size(config.delta, config.f)
        run.n_target = min(solved, len(corpus))
        run.tau = sampling.solve_iterations(max(run.n_target, 1), config.f, config.h)
        run.phase = "clustering"
        run.iteration = 1
        self._issue_clustering_tasks(run)
        return run

    def get_run(self, run_id: str) -> RunState:
        try:
            return self.runs[run_id]
        except KeyError:
            raise KeyError(f"unknown run {run_id!r}") from None

    # ---- task issuance ---------------------------------------------------

    def _issue_clustering_tasks(self, run: RunState) -> None:
        cfg = run.config
        t = run.hierarchy
        if t is None:
            sample = sampling.generate_sample(
                None, cfg.h, run.corpus, run.rng, sample_id=f"sample-{run.iteration}", iteration=run.iteration
            )
            self._add_clustering_task(run, sample)
            return
        leaves = t.leaves()
        if len(leaves) < cfg.h:
            sample = sampling.generate_sample(
                t, cfg.h, run.corpus, run.rng, sample_id=f"sample-{run.iteration}", iteration=run.iteration
            )
            self._add_clustering_task(run, sample)
            return
        # Kernel would crowd out new items: split it and issue one portion task
        # per part, all sharing the same new items.
        kernel = {run.rng.choice(sorted(t.nodes[leaf].items)) for leaf in sorted(leaves)}
        parts = 2
        while math.ceil(len(kernel) / parts) >= cfg.h:
            parts += 1
        portions = sampling.split_kernel(kernel, parts)
        new_count = cfg.h - max(len(p) for p in portions)
        fresh = sorted(run.corpus.ids() - t.covered_items)
        new_items = set(run.rng.sample(fresh, min(new_count, len(fresh))))
        for idx, portion in enumerate(portions):
            sample = Sample(
                sample_id=f"sample-{run.iteration}p{idx}",
                items=portion | new_items,
                kernel=portion,
                iteration=run.iteration,
            )
            self._add_clustering_task(run, sample)

    def _add_clustering_task(self, run: RunState, sample: Sample) -> None:
        run.samples[sample.sample_id] = sample
        task = Task(
            task_id=run.new_task_id(),
            kind="clustering",
            item_ids=sorted(sample.items),
            assignments_remaining=run.config.m,
            sample_id=sample.sample_id,
            iteration=sample.iteration,
        )
        run.tasks[task.task_id] = task
        run.task_order.append(task.task_id)

    # ---- submissions -----------------------------------------------------

    def submit_clustering(
        self,
        run_id: str,
        task_id: str,
        worker_id: str,
        clusters: list[list[str]],
        submission_id: str,
    ) -> SubmissionResult:
        run = self.get_run(run_id)
        with run.lock:
            if submission_id in run.submission_results:
                prior = run.submission_results[submission_id]
                return SubmissionResult(prior.accepted, prior.reason, prior.violations, True, run.phase, prior.task_status)
            result = self._check_clustering(run, task_id, worker_id, clusters)
            if result.accepted:
                event = {
                    "type": "clustering_submitted",
                    "task_id": task_id,
                    "worker_id": worker_id,
                    "submission_id": submission_id,
                    "clusters": [sorted(c) for c in clusters],
                }
                self._apply_clustering(run, event)
                self._append_event(run, event)
                result.phase = run.phase
                result.task_status = run.tasks[task_id].status
                # only accepted submissions are cached: rejections are free to
                # retry under the same id once the payload is fixed
                run.submission_results[submission_id] = result
            return result

    def _check_clustering(
        self, run: RunState, task_id: str, worker_id: str, clusters: list[list[str]]
    ) -> SubmissionResult:
        task = run.tasks.get(task_id)
        if task is None:
            return SubmissionResult(False, "unknown-task", phase=run.phase)
        if task.kind != "clustering":
            return SubmissionResult(False, "wrong-task-kind", phase=run.phase)
        if task.status != "open":
            return SubmissionResult(False, "task-closed", phase=run.phase)
        if worker_id in task.answered_by:
            return SubmissionResult(False, "duplicate-worker", phase=run.phase)
        assert task.sample_id is not None
        c = Clustering.from_lists(worker_id, task.sample_id, clusters)
        report = validate_clustering(c, run.samples[task.sample_id])
        if not report.ok:
            return SubmissionResult(
                False, "invalid-clustering", [v.to_dict() for v in report.violations], phase=run.phase
            )
        return SubmissionResult(True, phase=run.phase)

    def _apply_clustering(self, run: RunState, event: dict) -> None:
        task = run.tasks[event["task_id"]]
        c = Clustering.from_lists(event["worker_id"], task.sample_id or "", event["clusters"])
        run.response_log.append(
            {"kind": "clustering", "task_id": task.task_id, "worker_id": c.worker_id, "clusters": event["clusters"]}
        )
        task.answered_by.add(c.worker_id)
        task.assignments_remaining -= 1
        run.clustering_assignments += 1
        if task.assignments_remaining == 0:
            task.status = "complete"
        iteration_tasks = run.clustering_tasks_of_iteration(run.iteration)
        if all(t.status == "complete" for t in iteration_tasks):
            self._advance_iteration(run, iteration_tasks)

    def _responses_of_task(self, run: RunState, task: Task) -> list[Clustering]:
        return [
            Clustering.from_lists(r["worker_id"], task.sample_id or "", r["clusters"])
            for r in run.response_log
            if r["kind"] == "clustering" and r["task_id"] == task.task_id
        ]

    def _advance_iteration(self, run: RunState, iteration_tasks: list[Task]) -> None:
        for task in iteration_tasks:
            responses = self._responses_of_task(run, task)
            graph = consensus.build_clustering_graph(responses)
            run.graph_exports.append(
                {"iteration": run.iteration, "task_id": task.task_id, "text": graph.to_text()}
            )
            if consensus.clustering_in_multiple_maximal_cliques(graph):
                run.clique_ambiguous = True
            result = consensus.resolve_consensus(graph)
            ts = result.hierarchy
            sample = run.samples[task.sample_id or ""]
            if run.hierarchy is None:
                run.hierarchy = ts
            else:
                trace: list[merging.MergeDecision] = []
                run.hierarchy = merging.merge_hierarchies(run.hierarchy, ts, sample.kernel, trace=trace)
                run.merge_trace.extend(
                    {"iteration": run.iteration, "task_id": task.task_id, **d.to_dict()} for d in trace
                )
            for i in result.member_vertex_indices:
                vertex = graph.vertices[i]
                for worker_id in vertex.worker_ids:
                    run.retained.append(
                        Clustering(worker_id, vertex.clustering.sample_id, list(vertex.clustering.clusters))
                    )
        run.iterations_completed = run.iteration
        report = validate_hierarchy(run.hierarchy)  # internal invariant; merge guarantees it
        if not report.ok:
            raise RuntimeError(f"hierarchy invariant broken: {report.to_dict()}")
        remaining = run.corpus.ids() - run.hierarchy.covered_items
        if run.iteration < run.tau and remaining:
            run.iteration += 1
            self._issue_clustering_tasks(run)
        else:
            self._enter_frontier_phase(run)

    def _enter_frontier_phase(self, run: RunState) -> None:
        run.phase = "frontier-selection"
        assert run.hierarchy is not None
        t = run.hierarchy
        projected: list[Frontier] = []
        for c in run.retained:
            fr = frontier_mod.project_clustering(t, c)
            if fr is None:
                run.responses_dropped += 1
            else:
                projected.append(fr)
        run.split_stats = frontier_mod.estimate_split_probabilities(t, projected)
        run.frontier_result = frontier_mod.max_likelihood_frontier(t, run.split_stats)
        run.frontier_order = sorted(run.frontier_result.frontier.nodes, key=_node_creation_order)
        run.pivots = frontier_mod.select_pivots(
            t, run.frontier_result.frontier, run.config.pivots_per_cluster, run.rng
        )
        run.covered_at_frontier = len(t.covered_items)
        remaining = sorted(run.corpus.ids() - t.covered_items)
        if not remaining:
            run.phase = "done"
            self._snapshot(run)
            return
        run.phase = "categorization"
        batch = run.config.categorization_batch
        for start in range(0, len(remaining), batch):
            chunk = remaining[start : start + batch]
            task = Task(
                task_id=run.new_task_id(),
                kind="categorization",
                item_ids=chunk,
                assignments_remaining=run.config.theta,
                pivots=run.pivots,
            )
            run.tasks[task.task_id] = task
            run.task_order.append(task.task_id)
        self._snapshot(run)

    def submit_categorization(
        self,
        run_id: str,
        task_id: str,
        worker_id: str,
        assignments: dict[str, str | None],
        submission_id: str,
    ) -> SubmissionResult:
        run = self.get_run(run_id)
        with run.lock:
            if submission_id in run.submission_results:
                prior = run.submission_results[submission_id]
                return SubmissionResult(prior.accepted, prior.reason, prior.violations, True, run.phase, prior.task_status)
            result = self._check_categorization(run, task_id, worker_id, assignments)
            if result.accepted:
                event = {
                    "type": "categorization_submitted",
                    "task_id": task_id,
                    "worker_id": worker_id,
                    "submission_id": submission_id,
                    "assignments": dict(sorted(assignments.items())),
                }
                self._apply_categorization(run, event)
                self._append_event(run, event)
                result.phase = run.phase
                result.task_status = run.tasks[task_id].status
                run.submission_results[submission_id] = result
            return result

    def _check_categorization(
        self, run: RunState, task_id: str, worker_id: str, assignments: dict[str, str | None]
    ) -> SubmissionResult:
        task = run.tasks.get(task_id)
        if task is None:
            return SubmissionResult(False, "unknown-task", phase=run.phase)
        if task.kind != "categorization":
            return SubmissionResult(False, "wrong-task-kind", phase=run.phase)
        if task.status != "open":
            return SubmissionResult(False, "task-closed", phase=run.phase)
        if worker_id in task.answered_by:
            return SubmissionResult(False, "duplicate-worker", phase=run.phase)
        missing = set(task.item_ids) - set(assignments)
        if missing:
            return SubmissionResult(False, "incomplete", [{"item_ids": sorted(missing)}], phase=run.phase)
        extra = set(assignments) - set(task.item_ids)
        if extra:
            return SubmissionResult(False, "unknown-item", [{"item_ids": sorted(extra)}], phase=run.phase)
        valid = set(run.frontier_order)
        bad = {cid for cid in assignments.values() if cid is not None and cid not in valid}
        if bad:
            return SubmissionResult(False, "unknown-cluster", [{"cluster_ids": sorted(bad)}], phase=run.phase)
        return SubmissionResult(True, phase=run.phase)

    def _apply_categorization(self, run: RunState, event: dict) -> None:
        task = run.tasks[event["task_id"]]
        assignments: dict[str, str | None] = event["assignments"]
        run.response_log.append(
            {
                "kind": "categorization",
                "task_id": task.task_id,
                "worker_id": event["worker_id"],
                "assignments": assignments,
            }
        )
        task.answered_by.add(event["worker_id"])
        task.assignments_remaining -= 1
        run.categorization_assignments += 1
        for item_id, cid in assignments.items():
            run.votes.setdefault(item_id, []).append(cid)
        if task.assignments_remaining == 0:
            task.status = "complete"
            for item_id in task.item_ids:
                winner = frontier_mod.aggregate_categorization_votes(
                    item_id, run.votes[item_id], run.config.theta, run.frontier_order
                )
                if winner is None:
                    run.uncategorizable.append(item_id)
                else:
                    run.assignment[item_id] = winner
        if all(t.status == "complete" for t in run.tasks.values()):
            run.phase = "done"
            self._snapshot(run)

    # ---- reads -----------------------------------------------------------

    def get_task(self, run_id: str, worker_id: str) -> dict | None:
        run = self.get_run(run_id)
        with run.lock:
            for task in run.open_tasks():
                if worker_id in task.answered_by:
                    continue
                payload = {
                    "task_id": task.task_id,
                    "kind": task.kind,
                    "assignments_remaining": task.assignments_remaining,
                    "items": [
                        {"item_id": iid, "payload": run.corpus.items[iid].payload} for iid in task.item_ids
                    ],
                }
                if task.pivots is not None:
                    payload["pivots"] = {
                        cid: [{"item_id": iid, "payload": run.corpus.items[iid].payload} for iid in ids]
                        for cid, ids in task.pivots.items()
                    }
                return payload
            return None

    def run_summary(self, run_id: str) -> dict:
        run = self.get_run(run_id)
        with run.lock:
            return {
                "run_id": run.run_id,
                "phase": run.phase,
                "mode": run.mode,
                "iteration": run.iteration,
                "tau": run.tau,
                "n_target": run.n_target,
                "open_tasks": [
                    {
                        "task_id": t.task_id,
                        "kind": t.kind,
                        "assignments_remaining": t.assignments_remaining,
                        "item_count": len(t.item_ids),
                    }
                    for t in run.open_tasks()
                ],
            }

    def consensus_clusters(self, run: RunState) -> dict[str, set[str]]:
        """Frontier clusters with categorized items folded in."""
        if run.frontier_result is None or run.hierarchy is None:
            return {}
        clusters = {nid: set(run.hierarchy.nodes[nid].items) for nid in run.frontier_order}
        for item_id, cid in run.assignment.items():
            clusters[cid].add(item_id)
        return clusters

    def run_report(self, run_id: str) -> dict:
        run = self.get_run(run_id)
        with run.lock:
            return self._report_locked(run)

    def _report_locked(self, run: RunState) -> dict:
        cfg = run.config
        planned_assignments = sampling.planned_task_assignments(run.n_target, cfg.f, cfg.h, cfg.m)
        report: dict[str, Any] = {
            "run_id": run.run_id,
            "phase": run.phase,
            "final": run.phase == "done",
            "mode": run.mode,
            "config": cfg.to_dict(),
            "n_target": run.n_target,
            "n_exact_for_delta": sampling.solve_sample_size(cfg.delta, cfg.f) if cfg.f else 0,
            "tau": run.tau,
            "iterations_completed": run.iterations_completed,
            "corpus_size": len(run.corpus),
            "covered_items": len(run.hierarchy.covered_items) if run.hierarchy else 0,
            "coverage_bound": sampling.CoverageReport.for_parameters(run.n_target, cfg.f).to_dict(),
            "discovery_bound_applicable": not run.clique_ambiguous,
            "hierarchy": run.hierarchy.tree_dump() if run.hierarchy else None,
            "cost": {
                "clustering_assignments": run.clustering_assignments,
                "planned_clustering_assignments": planned_assignments,
                "clustering_tasks": sum(1 for t in run.tasks.values() if t.kind == "clustering"),
                "categorization_assignments": run.categorization_assignments,
                "categorization_tasks": sum(1 for t in run.tasks.values() if t.kind == "categorization"),
                "planned_categorization_votes": cfg.theta
                * max(len(run.corpus) - (run.covered_at_frontier or run.n_target), 0),
            },
        }
        if run.frontier_result is not None and run.hierarchy is not None:
            stats = run.split_stats
            report["frontier"] = {
                "log_likelihood": run.frontier_result.log_likelihood,
                "responses_used": stats.responses_used if stats else 0,
                "responses_dropped": run.responses_dropped,
                "nodes": [
                    {
                        "node_id": nid,
                        "label": run.hierarchy.nodes[nid].label,
                        "is_pool": run.hierarchy.nodes[nid].is_pool,
                        "item_count": len(run.hierarchy.nodes[nid].items),
                        "not_split_prob": stats.not_split_prob[nid] if stats else None,
                    }
                    for nid in run.frontier_order
                ],
            }
            clusters = self.consensus_clusters(run)
            report["consensus_clustering"] = {
                "clusters": {nid: sorted(items) for nid, items in clusters.items()},
                "uncategorizable": sorted(run.uncategorizable),
            }
            report["metrics"] = self._ground_truth_metrics(run, clusters)
        return report

    def _ground_truth_metrics(self, run: RunState, clusters: dict[str, set[str]]) -> dict | None:
        labeled = [it for it in run.corpus.items.values() if it.ground_truth_labels]
        if not labeled or not clusters:
            return None
        clustered_items = set().union(*clusters.values())
        perspective_names: list[str] = sorted({name for it in labeled for name in (it.ground_truth_labels or {})})
        out: dict[str, Any] = {"per_perspective": {}}
        parts = [frozenset(c) for c in clusters.values() if c]
        for name in perspective_names:
            by_label: dict[str, set[str]] = {}
            ok = True
            for iid in clustered_items:
                gt = run.corpus.items[iid].ground_truth_labels or {}
                if name not in gt:
                    ok = False
                    break
                by_label.setdefault(gt[name], set()).add(iid)
            if not ok:
                continue
            truth = [frozenset(c) for c in by_label.values()]
            out["per_perspective"][name] = {
                "vi_bits": metrics_mod.variation_of_information(parts, truth),
                "nmi": metrics_mod.normalized_mutual_information(parts, truth),
            }
        if run.worker_model is not None:
            perspectives: list[Perspective] = run.worker_model.perspectives
            try:
                hc = metrics_mod.clustering_hierarchy_count(parts, run.corpus, perspectives)
                out["hierarchy_count"] = hc.to_dict()
            except ValueError:
                pass
        return out

    # ---- persistence -----------------------------------------------------

    def _run_dir(self, run_id: str) -> Path | None:
        if not self.data_dir:
            return None
        d = self.data_dir / run_id
        d.mkdir(parents=True, exist_ok=True)
        return d

    def _append_event(self, run: RunState, event: dict) -> None:
        d = self._run_dir(run.run_id)
        if not d:
            return
        with (d / "events.jsonl").open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _snapshot(self, run: RunState) -> None:
        d = self._run_dir(run.run_id)
        if not d:
            return
        snap = {
            "run_id": run.run_id,
            "phase": run.phase,
            "iteration": run.iteration,
            "tau": run.tau,
            "n_target": run.n_target,
            "hierarchy": run.hierarchy.to_dict() if run.hierarchy else None,
            "tasks": [run.tasks[tid].to_dict() for tid in run.task_order],
            "frontier": run.frontier_result.to_dict() if run.frontier_result else None,
            "assignment": dict(sorted(run.assignment.items())),
            "uncategorizable": sorted(run.uncategorizable),
        }
        (d / "snapshot.json").write_text(json.dumps(snap, indent=2, sort_keys=True), encoding="utf-8")

    def _recover(self) -> None:
        assert self.data_dir is not None
        for run_dir in sorted(self.data_dir.iterdir()):
            log = run_dir / "events.jsonl"
            if not log.is_file():
                continue
            self.replay_log(log)

    def replay_log(self, log_path: str | Path) -> str:
        """Rebuild a run by re-applying its accepted events; returns the run id."""
        run: RunState | None = None
        with Path(log_path).open(encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                event = json.loads(line)
                if event["type"] == "run_created":
                    run = self._apply_run_created(event)
                    self.runs[run.run_id] = run
                elif event["type"] == "clustering_submitted":
                    assert run is not None
                    self._apply_clustering(run, event)
                    run.submission_results[event["submission_id"]] = SubmissionResult(True, phase=run.phase)
                elif event["type"] == "categorization_submitted":
                    assert run is not None
                    self._apply_categorization(run, event)
                    run.submission_results[event["submission_id"]] = SubmissionResult(True, phase=run.phase)
                else:
                    raise ValueError(f"unknown event type {event['type']!r}")
        if run is None:
            raise ValueError(f"no run_created event in {log_path}")
        return run.run_id


def _node_creation_order(node_id: str) -> tuple:
    if node_id.startswith("n") and node_id[1:].isdigit():
        return (0, int(node_id[1:]))
    return (1, node_id)
