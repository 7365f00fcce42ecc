// Entry point. Routes on query parameters:
//   ?role=worker&run=RUN_ID&worker=WORKER_ID   task console
//   ?role=dashboard&run=RUN_ID                 operator dashboard

import { QuorumApi } from "./api.js";
import { ClusteringBoardState, newClusteringBoard } from "./board.js";
import { CategorizationBoardState, newCategorizationBoard } from "./categorize.js";
import { buildDashboard, DashboardView, errorView, notFoundView } from "./dashboard.js";
import { clearDraft, defaultStore, draftKey, loadDraft, saveDraft } from "./draft.js";
import { renderCategorizationBoard, renderClusteringBoard } from "./dom.js";
import type { Task, TaskItem } from "./types.js";

const api = new QuorumApi("");
const store = defaultStore();

function app(): HTMLElement {
  const node = document.getElementById("app");
  if (!node) {
    throw new Error("missing #app");
  }
  return node;
}

function banner(text: string): void {
  const node = document.createElement("div");
  node.className = "banner";
  node.textContent = text;
  app().replaceChildren(node);
}

async function workerLoop(runId: string, workerId: string): Promise<void> {
  const task = await api.nextTask(runId, workerId);
  if (!task) {
    const summary = await api.summary(runId).catch(() => null);
    banner(
      summary && summary.phase !== "done"
        ? "No task for you right now; waiting for other workers. Refresh to check again."
        : "This run is complete. Thanks for clustering!",
    );
    return;
  }
  const itemsById = new Map<string, TaskItem>(task.items.map((it) => [it.item_id, it]));
  const key = draftKey(runId, task.task_id, workerId);
  if (task.kind === "clustering") {
    renderClusteringTask(runId, workerId, task, itemsById, key);
  } else {
    renderCategorizationTask(runId, workerId, task, itemsById, key);
  }
}

function renderClusteringTask(
  runId: string,
  workerId: string,
  task: Task,
  itemsById: Map<string, TaskItem>,
  key: string,
): void {
  const draft = loadDraft<ClusteringBoardState>(store, key);
  const controller = {
    state: draft ?? newClusteringBoard(task),
    message: "",
    onChange: (state: ClusteringBoardState) => saveDraft(store, key, state),
    onSubmit: (clusters: string[][]) => {
      void api
        .submitClustering(runId, task.task_id, workerId, clusters)
        .then((result) => {
          if (result.accepted) {
            clearDraft(store, key);
            banner("Submitted. Loading your next task...");
            void workerLoop(runId, workerId);
          } else {
            controller.message = `Rejected: ${result.reason}`;
            renderClusteringBoard(app(), itemsById, controller);
          }
        })
        .catch((err) => {
          controller.message = `Network problem, draft kept: ${String(err)}`;
          renderClusteringBoard(app(), itemsById, controller);
        });
    },
  };
  renderClusteringBoard(app(), itemsById, controller);
}

function renderCategorizationTask(
  runId: string,
  workerId: string,
  task: Task,
  itemsById: Map<string, TaskItem>,
  key: string,
): void {
  const draft = loadDraft<CategorizationBoardState>(store, key);
  const controller = {
    state: draft ?? newCategorizationBoard(task),
    message: "",
    onChange: (state: CategorizationBoardState) => saveDraft(store, key, state),
    onSubmit: (assignments: Record<string, string>) => {
      void api
        .submitCategorization(runId, task.task_id, workerId, assignments)
        .then((result) => {
          if (result.accepted) {
            clearDraft(store, key);
            banner("Submitted. Loading your next task...");
            void workerLoop(runId, workerId);
          } else {
            controller.message = `Rejected: ${result.reason}`;
            renderCategorizationBoard(app(), itemsById, controller);
          }
        })
        .catch((err) => {
          controller.message = `Network problem, draft kept: ${String(err)}`;
          renderCategorizationBoard(app(), itemsById, controller);
        });
    },
  };
  renderCategorizationBoard(app(), itemsById, controller);
}

function renderDashboard(view: DashboardView): void {
  const root = app();
  root.replaceChildren();
  const add = (tag: string, cls: string, text: string) => {
    const node = document.createElement(tag);
    node.className = cls;
    node.textContent = text;
    root.appendChild(node);
    return node;
  };
  if (view.kind !== "ok") {
    add("div", "banner", view.message ?? "error");
    const retry = add("button", "retry", "Retry");
    retry.addEventListener("click", () => void dashboardLoop(view.runId ?? ""));
    return;
  }
  add("h2", "phase", `Run ${view.runId}: ${view.phase}`);
  add("div", "badge", `iteration ${view.iterationBadge}`);
  add(
    "div",
    "queue",
    `${view.queueDepth} open task(s), ${view.openAssignments} assignment(s) outstanding`,
  );
  if (view.coveredItems !== undefined) {
    add("div", "coverage", `${view.coveredItems} of ${view.corpusSize} items organized`);
  }
  if (view.tree) {
    const tree = document.createElement("div");
    tree.className = "tree";
    for (const row of view.tree) {
      const detail = document.createElement(row.hasChildren ? "details" : "div");
      detail.className = "tree-row";
      (detail as HTMLElement).style.marginLeft = `${row.depth}em`;
      const text = `${row.label} [${row.itemCount}]${row.isPool ? " (pending)" : ""}`;
      if (row.hasChildren) {
        const summary = document.createElement("summary");
        summary.textContent = text;
        detail.appendChild(summary);
        (detail as HTMLDetailsElement).open = true;
      } else {
        detail.textContent = text;
      }
      tree.appendChild(detail);
    }
    root.appendChild(tree);
  }
  if (view.frontier) {
    add("h3", "", "Consensus frontier");
    for (const node of view.frontier) {
      add("div", "frontier-node", `${node.label}: ${node.itemCount} item(s)`);
    }
    add("div", "loglik", `log likelihood ${view.logLikelihood?.toFixed(4)}`);
  }
}

async function dashboardLoop(runId: string): Promise<void> {
  try {
    const summary = await api.summary(runId);
    const report = await api.report(runId).catch(() => null);
    renderDashboard(buildDashboard(summary, report));
  } catch (err) {
    const message = String(err);
    renderDashboard(message.includes("404") ? notFoundView(runId) : errorView(message));
    return;
  }
  setTimeout(() => void dashboardLoop(runId), 3000);
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const role = params.get("role") ?? "worker";
  const runId = params.get("run") ?? "";
  if (!runId) {
    banner("Pass ?run=RUN_ID (and ?worker=WORKER_ID for the worker console).");
    return;
  }
  if (role === "dashboard") {
    void dashboardLoop(runId);
    return;
  }
  const workerId = params.get("worker") ?? "";
  if (!workerId) {
    banner("Pass ?worker=WORKER_ID to work on tasks.");
    return;
  }
  void workerLoop(runId, workerId);
}

boot();
