// Categorization board: fixed pivot-anchored columns. Workers can only drag
// new items into existing columns (or back to the carousel); there is no API
// for adding or removing columns, mirroring the interface constraint. Submit
// unlocks only when every item is placed.

import type { Task, TaskItem } from "./types.js";

export interface PivotColumn {
  clusterId: string;
  pivots: TaskItem[];
  placed: string[];
}

export interface CategorizationBoardState {
  taskId: string;
  itemOrder: string[];
  carousel: string[];
  columns: PivotColumn[];
}

export function newCategorizationBoard(task: Task): CategorizationBoardState {
  if (task.kind !== "categorization") {
    throw new Error(`expected a categorization task, got ${task.kind}`);
  }
  const pivots = task.pivots ?? {};
  const ids = task.items.map((it) => it.item_id);
  const columns = Object.keys(pivots)
    .sort()
    .map((clusterId) => ({ clusterId, pivots: pivots[clusterId] ?? [], placed: [] as string[] }));
  if (columns.length === 0) {
    throw new Error("categorization task carries no pivot clusters");
  }
  return { taskId: task.task_id, itemOrder: ids, carousel: [...ids], columns };
}

function detach(state: CategorizationBoardState, itemId: string): CategorizationBoardState {
  return {
    ...state,
    carousel: state.carousel.filter((x) => x !== itemId),
    columns: state.columns.map((c) => ({ ...c, placed: c.placed.filter((x) => x !== itemId) })),
  };
}

export function placeItem(
  state: CategorizationBoardState,
  itemId: string,
  clusterId: string,
): CategorizationBoardState {
  if (!state.itemOrder.includes(itemId)) {
    throw new Error(`unknown item ${itemId}`);
  }
  if (!state.columns.some((c) => c.clusterId === clusterId)) {
    throw new Error(`unknown cluster ${clusterId}`);
  }
  const detached = detach(state, itemId);
  return {
    ...detached,
    columns: detached.columns.map((c) =>
      c.clusterId === clusterId ? { ...c, placed: [...c.placed, itemId] } : c,
    ),
  };
}

export function returnItem(state: CategorizationBoardState, itemId: string): CategorizationBoardState {
  const detached = detach(state, itemId);
  return { ...detached, carousel: [...detached.carousel, itemId] };
}

export function canSubmitCategorization(state: CategorizationBoardState): boolean {
  return state.carousel.length === 0;
}

export function categorizationAssignments(state: CategorizationBoardState): Record<string, string> {
  if (!canSubmitCategorization(state)) {
    throw new Error("place every item before submitting");
  }
  const out: Record<string, string> = {};
  for (const column of state.columns) {
    for (const itemId of column.placed) {
      out[itemId] = column.clusterId;
    }
  }
  return out;
}
