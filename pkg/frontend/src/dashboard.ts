// Read-only run dashboard view model: phase, iteration progress, queue depth,
// the hierarchy as a collapsible tree, and the consensus frontier once known.

import type { HierarchyNodeDump, RunReport, RunSummary } from "./types.js";

export interface TreeRow {
  depth: number;
  label: string;
  itemCount: number;
  isPool: boolean;
  hasChildren: boolean;
  nodeId: string;
}

export interface DashboardView {
  kind: "ok" | "not-found" | "error";
  message?: string;
  runId?: string;
  phase?: string;
  iterationBadge?: string;
  queueDepth?: number;
  openAssignments?: number;
  tree?: TreeRow[];
  frontier?: { label: string; itemCount: number; isPool: boolean }[];
  logLikelihood?: number;
  coveredItems?: number;
  corpusSize?: number;
}

export function iterationBadge(iteration: number, tau: number): string {
  return `${iteration} of ${tau}`;
}

export function flattenTree(root: HierarchyNodeDump | null): TreeRow[] {
  if (!root) {
    return [];
  }
  const rows: TreeRow[] = [];
  const walk = (node: HierarchyNodeDump, depth: number): void => {
    rows.push({
      depth,
      label: node.label ?? (node.is_pool ? "(pending pool)" : "(unnamed concept)"),
      itemCount: node.item_count,
      isPool: node.is_pool,
      hasChildren: node.children.length > 0,
      nodeId: node.node_id,
    });
    for (const child of node.children) {
      walk(child, depth + 1);
    }
  };
  walk(root, 0);
  return rows;
}

export function buildDashboard(summary: RunSummary, report: RunReport | null): DashboardView {
  const view: DashboardView = {
    kind: "ok",
    runId: summary.run_id,
    phase: summary.phase,
    iterationBadge: iterationBadge(summary.iteration, summary.tau),
    queueDepth: summary.open_tasks.length,
    openAssignments: summary.open_tasks.reduce((acc, t) => acc + t.assignments_remaining, 0),
  };
  if (report) {
    view.tree = flattenTree(report.hierarchy);
    view.coveredItems = report.covered_items;
    view.corpusSize = report.corpus_size;
    if (report.frontier) {
      view.logLikelihood = report.frontier.log_likelihood;
      view.frontier = report.frontier.nodes.map((n) => ({
        label: n.label ?? (n.is_pool ? "(pending pool)" : n.node_id),
        itemCount: n.item_count,
        isPool: n.is_pool,
      }));
    }
  }
  return view;
}

export function notFoundView(runId: string): DashboardView {
  return { kind: "not-found", message: `no run ${runId}` };
}

export function errorView(message: string): DashboardView {
  return { kind: "error", message };
}
