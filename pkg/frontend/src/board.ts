// Clustering board state machine. Pure functions over a JSON-serializable
// state so drafts persist across reloads and the gating rules are testable
// without a DOM. The submission gate guarantees partition validity: every item
// sits in exactly one non-empty cluster and the carousel is empty, so the
// service can never reject a board-built payload for partition errors.

import type { Task, TaskItem } from "./types.js";

export interface ClusterColumn {
  id: number;
  items: string[];
}

export interface ClusteringBoardState {
  taskId: string;
  itemOrder: string[];
  carousel: string[];
  clusters: ClusterColumn[];
  nextClusterId: number;
}

export interface MoveTarget {
  kind: "carousel" | "cluster";
  clusterId?: number;
}

export function newClusteringBoard(task: Task): ClusteringBoardState {
  if (task.kind !== "clustering") {
    throw new Error(`expected a clustering task, got ${task.kind}`);
  }
  const ids = task.items.map((it: TaskItem) => it.item_id);
  return {
    taskId: task.task_id,
    itemOrder: ids,
    carousel: [...ids],
    clusters: [{ id: 1, items: [] }],
    nextClusterId: 2,
  };
}

export function addCluster(state: ClusteringBoardState): ClusteringBoardState {
  return {
    ...state,
    clusters: [...state.clusters, { id: state.nextClusterId, items: [] }],
    nextClusterId: state.nextClusterId + 1,
  };
}

export interface RemoveResult {
  state: ClusteringBoardState;
  error?: string;
}

export function removeCluster(state: ClusteringBoardState, clusterId: number): RemoveResult {
  const column = state.clusters.find((c) => c.id === clusterId);
  if (!column) {
    return { state, error: `no cluster ${clusterId}` };
  }
  if (column.items.length > 0) {
    return { state, error: "move its items out before removing a cluster" };
  }
  return { state: { ...state, clusters: state.clusters.filter((c) => c.id !== clusterId) } };
}

function detach(state: ClusteringBoardState, itemId: string): ClusteringBoardState {
  return {
    ...state,
    carousel: state.carousel.filter((x) => x !== itemId),
    clusters: state.clusters.map((c) => ({ ...c, items: c.items.filter((x) => x !== itemId) })),
  };
}

export function moveItem(
  state: ClusteringBoardState,
  itemId: string,
  target: MoveTarget,
): ClusteringBoardState {
  if (!state.itemOrder.includes(itemId)) {
    throw new Error(`unknown item ${itemId}`);
  }
  const detached = detach(state, itemId);
  if (target.kind === "carousel") {
    return { ...detached, carousel: [...detached.carousel, itemId] };
  }
  const column = detached.clusters.find((c) => c.id === target.clusterId);
  if (!column) {
    throw new Error(`unknown cluster ${target.clusterId}`);
  }
  return {
    ...detached,
    clusters: detached.clusters.map((c) =>
      c.id === target.clusterId ? { ...c, items: [...c.items, itemId] } : c,
    ),
  };
}

export function locateItem(state: ClusteringBoardState, itemId: string): MoveTarget {
  if (state.carousel.includes(itemId)) {
    return { kind: "carousel" };
  }
  for (const c of state.clusters) {
    if (c.items.includes(itemId)) {
      return { kind: "cluster", clusterId: c.id };
    }
  }
  throw new Error(`item ${itemId} is nowhere on the board`);
}

export function canSubmitClustering(state: ClusteringBoardState): boolean {
  return (
    state.carousel.length === 0 &&
    state.clusters.length > 0 &&
    state.clusters.every((c) => c.items.length > 0)
  );
}

export function clusteringPayload(state: ClusteringBoardState): string[][] {
  if (!canSubmitClustering(state)) {
    throw new Error("board is not submittable: unplaced items or empty clusters remain");
  }
  return state.clusters.map((c) => [...c.items].sort());
}
