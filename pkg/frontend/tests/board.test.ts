import { describe, expect, it } from "vitest";

import {
  addCluster,
  canSubmitClustering,
  ClusteringBoardState,
  clusteringPayload,
  locateItem,
  moveItem,
  newClusteringBoard,
  removeCluster,
} from "../src/board.js";
import type { Task } from "../src/types.js";

function clusteringTask(n: number): Task {
  return {
    task_id: "t1",
    kind: "clustering",
    assignments_remaining: 5,
    items: Array.from({ length: n }, (_, i) => ({ item_id: `x${i}`, payload: { v: i } })),
  };
}

// deterministic PRNG so the randomized sessions are reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("clustering board gating", () => {
  it("starts unsubmittable with everything in the carousel", () => {
    const s = newClusteringBoard(clusteringTask(5));
    expect(s.carousel).toHaveLength(5);
    expect(canSubmitClustering(s)).toBe(false);
  });

  it("unlocks submit only when the carousel is empty and no cluster is empty", () => {
    let s = newClusteringBoard(clusteringTask(3));
    s = addCluster(s);
    s = moveItem(s, "x0", { kind: "cluster", clusterId: 1 });
    s = moveItem(s, "x1", { kind: "cluster", clusterId: 1 });
    expect(canSubmitClustering(s)).toBe(false); // x2 unplaced
    s = moveItem(s, "x2", { kind: "cluster", clusterId: 2 });
    expect(canSubmitClustering(s)).toBe(true);
    s = addCluster(s); // an empty third cluster blocks submission again
    expect(canSubmitClustering(s)).toBe(false);
  });

  it("one item left in the carousel keeps submit disabled", () => {
    let s = newClusteringBoard(clusteringTask(2));
    s = moveItem(s, "x0", { kind: "cluster", clusterId: 1 });
    expect(canSubmitClustering(s)).toBe(false);
    expect(() => clusteringPayload(s)).toThrow();
  });
});

describe("cluster add and remove controls", () => {
  it("adds empty clusters with fresh ids", () => {
    let s = newClusteringBoard(clusteringTask(2));
    s = addCluster(s);
    s = addCluster(s);
    expect(s.clusters.map((c) => c.id)).toEqual([1, 2, 3]);
  });

  it("refuses to remove a populated cluster with a visible message", () => {
    let s = newClusteringBoard(clusteringTask(2));
    s = moveItem(s, "x0", { kind: "cluster", clusterId: 1 });
    const result = removeCluster(s, 1);
    expect(result.error).toMatch(/move its items out/);
    expect(result.state.clusters).toHaveLength(1); // unchanged
  });

  it("removes empty clusters", () => {
    let s = addCluster(newClusteringBoard(clusteringTask(2)));
    const result = removeCluster(s, 2);
    expect(result.error).toBeUndefined();
    expect(result.state.clusters.map((c) => c.id)).toEqual([1]);
  });
});

describe("single-location invariant", () => {
  it("an item always occupies exactly one location", () => {
    let s = newClusteringBoard(clusteringTask(4));
    s = addCluster(s);
    s = moveItem(s, "x1", { kind: "cluster", clusterId: 1 });
    s = moveItem(s, "x1", { kind: "cluster", clusterId: 2 });
    s = moveItem(s, "x1", { kind: "carousel" });
    const occurrences =
      s.carousel.filter((x) => x === "x1").length +
      s.clusters.reduce((acc, c) => acc + c.items.filter((x) => x === "x1").length, 0);
    expect(occurrences).toBe(1);
    expect(locateItem(s, "x1").kind).toBe("carousel");
  });
});

describe("randomized sessions build service-valid payloads", () => {
  it("50 random sessions all produce exact partitions of the task items", () => {
    for (let session = 0; session < 50; session++) {
      const rand = mulberry32(1000 + session);
      const n = 5 + Math.floor(rand() * 31); // 5..35 items
      const task = clusteringTask(n);
      let s: ClusteringBoardState = newClusteringBoard(task);

      // random walk of legal operations
      const steps = 50 + Math.floor(rand() * 150);
      for (let step = 0; step < steps; step++) {
        const op = rand();
        if (op < 0.1) {
          s = addCluster(s);
        } else if (op < 0.2) {
          const target = s.clusters[Math.floor(rand() * s.clusters.length)];
          if (target) {
            s = removeCluster(s, target.id).state; // no-op when populated
          }
        } else {
          const itemId = s.itemOrder[Math.floor(rand() * s.itemOrder.length)]!;
          if (rand() < 0.15) {
            s = moveItem(s, itemId, { kind: "carousel" });
          } else {
            const target = s.clusters[Math.floor(rand() * s.clusters.length)];
            if (target) {
              s = moveItem(s, itemId, { kind: "cluster", clusterId: target.id });
            }
          }
        }
      }
      // finish the task: place leftovers, drop empty clusters
      for (const itemId of [...s.carousel]) {
        const target = s.clusters[Math.floor(rand() * s.clusters.length)]!;
        s = moveItem(s, itemId, { kind: "cluster", clusterId: target.id });
      }
      for (const cluster of [...s.clusters]) {
        if (cluster.items.length === 0) {
          s = removeCluster(s, cluster.id).state;
        }
      }

      expect(canSubmitClustering(s)).toBe(true);
      const payload = clusteringPayload(s);

      // the partition conditions the service enforces
      const seen = new Set<string>();
      for (const cluster of payload) {
        expect(cluster.length).toBeGreaterThan(0);
        for (const itemId of cluster) {
          expect(seen.has(itemId)).toBe(false);
          seen.add(itemId);
        }
      }
      expect(seen.size).toBe(n);
      expect([...seen].sort()).toEqual(task.items.map((it) => it.item_id).sort());
    }
  });
});
