// DOM rendering and drag-and-drop wiring around the board state machines.

import {
  addCluster,
  canSubmitClustering,
  ClusteringBoardState,
  clusteringPayload,
  moveItem,
  removeCluster,
} from "./board.js";
import {
  canSubmitCategorization,
  categorizationAssignments,
  CategorizationBoardState,
  placeItem,
  returnItem,
} from "./categorize.js";
import type { TaskItem } from "./types.js";

export type Rerender = () => void;

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

// Image URIs become thumbnails; attribute records become labeled cards.
// Workers only ever see content, never concept labels or ground truth.
export function renderPayload(item: TaskItem): HTMLElement {
  const payload = item.payload;
  if (typeof payload === "string" && /^(https?:|data:|\/)/.test(payload)) {
    const img = document.createElement("img");
    img.src = payload;
    img.alt = item.item_id;
    img.className = "thumb";
    img.draggable = false;
    return img;
  }
  if (payload && typeof payload === "object") {
    const card = el("div", "card");
    for (const [key, value] of Object.entries(payload as Record<string, unknown>)) {
      card.appendChild(el("div", "attr", `${key}: ${String(value)}`));
    }
    return card;
  }
  return el("div", "card", payload === null || payload === undefined ? item.item_id : String(payload));
}

function itemChip(item: TaskItem): HTMLElement {
  const chip = el("div", "item-chip");
  chip.draggable = true;
  chip.dataset.itemId = item.item_id;
  chip.addEventListener("dragstart", (ev) => {
    ev.dataTransfer?.setData("text/plain", item.item_id);
  });
  chip.appendChild(renderPayload(item));
  return chip;
}

function dropZone(node: HTMLElement, onDrop: (itemId: string) => void): void {
  node.addEventListener("dragover", (ev) => {
    ev.preventDefault();
    node.classList.add("drop-hover");
  });
  node.addEventListener("dragleave", () => node.classList.remove("drop-hover"));
  node.addEventListener("drop", (ev) => {
    ev.preventDefault();
    node.classList.remove("drop-hover");
    const itemId = ev.dataTransfer?.getData("text/plain");
    if (itemId) {
      onDrop(itemId);
    }
  });
}

export interface ClusteringBoardController {
  state: ClusteringBoardState;
  message: string;
  onSubmit: (clusters: string[][]) => void;
  onChange: (state: ClusteringBoardState) => void;
}

export function renderClusteringBoard(
  root: HTMLElement,
  itemsById: Map<string, TaskItem>,
  controller: ClusteringBoardController,
): void {
  const rerender: Rerender = () => renderClusteringBoard(root, itemsById, controller);
  const update = (state: ClusteringBoardState): void => {
    controller.state = state;
    controller.onChange(state);
    rerender();
  };
  root.replaceChildren();

  const carousel = el("div", "carousel");
  carousel.appendChild(el("h3", undefined, `Unplaced (${controller.state.carousel.length})`));
  dropZone(carousel, (itemId) => update(moveItem(controller.state, itemId, { kind: "carousel" })));
  for (const id of controller.state.carousel) {
    const item = itemsById.get(id);
    if (item) {
      carousel.appendChild(itemChip(item));
    }
  }
  root.appendChild(carousel);

  const columns = el("div", "columns");
  for (const cluster of controller.state.clusters) {
    const column = el("div", "column");
    const head = el("div", "column-head");
    head.appendChild(el("span", undefined, `Cluster ${cluster.id} (${cluster.items.length})`));
    const minus = el("button", "remove-cluster", "−") as HTMLButtonElement;
    minus.addEventListener("click", () => {
      const result = removeCluster(controller.state, cluster.id);
      controller.message = result.error ?? "";
      update(result.state);
    });
    head.appendChild(minus);
    column.appendChild(head);
    dropZone(column, (itemId) =>
      update(moveItem(controller.state, itemId, { kind: "cluster", clusterId: cluster.id })),
    );
    for (const id of cluster.items) {
      const item = itemsById.get(id);
      if (item) {
        column.appendChild(itemChip(item));
      }
    }
    columns.appendChild(column);
  }
  const plus = el("button", "add-cluster", "+") as HTMLButtonElement;
  plus.addEventListener("click", () => update(addCluster(controller.state)));
  columns.appendChild(plus);
  root.appendChild(columns);

  if (controller.message) {
    root.appendChild(el("div", "message", controller.message));
  }

  const submit = el("button", "submit", "Submit clustering") as HTMLButtonElement;
  submit.disabled = !canSubmitClustering(controller.state);
  submit.addEventListener("click", () => controller.onSubmit(clusteringPayload(controller.state)));
  root.appendChild(submit);
}

export interface CategorizationBoardController {
  state: CategorizationBoardState;
  message: string;
  onSubmit: (assignments: Record<string, string>) => void;
  onChange: (state: CategorizationBoardState) => void;
}

export function renderCategorizationBoard(
  root: HTMLElement,
  itemsById: Map<string, TaskItem>,
  controller: CategorizationBoardController,
): void {
  const rerender: Rerender = () =>
    renderCategorizationBoard(root, itemsById, controller);
  const update = (state: CategorizationBoardState): void => {
    controller.state = state;
    controller.onChange(state);
    rerender();
  };
  root.replaceChildren();

  const carousel = el("div", "carousel");
  carousel.appendChild(el("h3", undefined, `To place (${controller.state.carousel.length})`));
  dropZone(carousel, (itemId) => update(returnItem(controller.state, itemId)));
  for (const id of controller.state.carousel) {
    const item = itemsById.get(id);
    if (item) {
      carousel.appendChild(itemChip(item));
    }
  }
  root.appendChild(carousel);

  // fixed columns: no add/remove controls exist on this board
  const columns = el("div", "columns");
  for (const column of controller.state.columns) {
    const node = el("div", "column");
    node.appendChild(el("div", "column-head", `Cluster (${column.placed.length} placed)`));
    const pivotRow = el("div", "pivots");
    for (const pivot of column.pivots) {
      pivotRow.appendChild(renderPayload(pivot));
    }
    node.appendChild(pivotRow);
    dropZone(node, (itemId) => update(placeItem(controller.state, itemId, column.clusterId)));
    for (const id of column.placed) {
      const item = itemsById.get(id);
      if (item) {
        node.appendChild(itemChip(item));
      }
    }
    columns.appendChild(node);
  }
  root.appendChild(columns);

  if (controller.message) {
    root.appendChild(el("div", "message", controller.message));
  }

  const submit = el("button", "submit", "Submit categorization") as HTMLButtonElement;
  submit.disabled = !canSubmitCategorization(controller.state);
  submit.addEventListener("click", () =>
    controller.onSubmit(categorizationAssignments(controller.state)),
  );
  root.appendChild(submit);
}
