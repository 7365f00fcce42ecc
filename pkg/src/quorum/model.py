"""Domain types for consensus organization: items, clusterings, concept hierarchies,
frontiers, samples and workflow configuration, plus the validation predicates for
every structural invariant they carry.

Identity of a concept is its item set; labels are optional operator metadata.
Item payloads are opaque — nothing in the engine ever inspects content.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


ROOT_LABEL = "Universe"


@dataclass(frozen=True)
class Item:
    """One corpus element. `payload` is an opaque content reference (image URI,
    attribute record, ...); `ground_truth_labels` maps perspective name -> leaf
    concept label and exists only for simulated corpora."""

    item_id: str
    payload: Any = None
    ground_truth_labels: dict[str, str] | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"item_id": self.item_id, "payload": self.payload}
        if self.ground_truth_labels is not None:
            d["ground_truth_labels"] = dict(self.ground_truth_labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Item":
        return cls(
            item_id=d["item_id"],
            payload=d.get("payload"),
            ground_truth_labels=d.get("ground_truth_labels"),
        )


@dataclass
class ItemCorpus:
    name: str
    items: dict[str, Item] = field(default_factory=dict)

    def __post_init__(self):
        if not self.items:
            raise ValueError("corpus must be non-empty")
        for item_id, item in self.items.items():
            if item.item_id != item_id:
                raise ValueError(f"corpus key {item_id!r} != item id {item.item_id!r}")

    @classmethod
    def from_items(cls, name: str, items: Iterable[Item]) -> "ItemCorpus":
        index: dict[str, Item] = {}
        for item in items:
            if item.item_id in index:
                raise ValueError(f"duplicate item id {item.item_id!r}")
            index[item.item_id] = item
        return cls(name=name, items=index)

    def ids(self) -> set[str]:
        return set(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "items": [self.items[i].to_dict() for i in sorted(self.items)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ItemCorpus":
        return cls.from_items(d["name"], (Item.from_dict(x) for x in d["items"]))


@dataclass
class Clustering:
    """One worker's partition of a sample: a list of non-empty, pairwise-disjoint
    item-id sets. Validity against the sample is checked by validate_clustering."""

    worker_id: str
    sample_id: str
    clusters: list[frozenset[str]]

    @classmethod
    def from_lists(cls, worker_id: str, sample_id: str, clusters: Iterable[Iterable[str]]) -> "Clustering":
        return cls(worker_id, sample_id, [frozenset(c) for c in clusters])

    def item_ids(self) -> set[str]:
        out: set[str] = set()
        for c in self.clusters:
            out |= c
        return out

    def partition_key(self) -> frozenset[frozenset[str]]:
        """Canonical identity of the partition, ignoring worker/sample ids."""
        return frozenset(self.clusters)

    def to_dict(self) -> dict:
        return {
            "worker_id": self.worker_id,
            "sample_id": self.sample_id,
            "clusters": [sorted(c) for c in sorted(self.clusters, key=lambda c: (len(c), sorted(c)))],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Clustering":
        return cls.from_lists(d["worker_id"], d["sample_id"], d["clusters"])


@dataclass
class ConceptNode:
    """A concept in a hierarchy. `items` is the concept's full extension (every
    item that is an instance, including those held by descendants). A pool node
    holds items known to belong to its parent concept whose sub-concept is still
    undetermined; pools behave as leaves."""

    node_id: str
    label: str | None = None
    children: list[str] = field(default_factory=list)
    items: set[str] = field(default_factory=set)
    is_pool: bool = False

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "node_id": self.node_id,
            "label": self.label,
            "children": list(self.children),
            "items": sorted(self.items),
        }
        if self.is_pool:
            d["is_pool"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConceptNode":
        return cls(
            node_id=d["node_id"],
            label=d.get("label"),
            children=list(d.get("children", [])),
            items=set(d.get("items", [])),
            is_pool=bool(d.get("is_pool", False)),
        )


@dataclass
class Hierarchy:
    """Rooted concept tree. The root is the Universe concept and holds every
    covered item; each non-leaf node's extension is the disjoint union of its
    children's extensions; no node is empty; children number 0 or >= 2."""

    root: str
    nodes: dict[str, ConceptNode]
    next_id: int = 0

    @property
    def covered_items(self) -> set[str]:
        return set(self.nodes[self.root].items)

    def fresh_id(self) -> str:
        while True:
            nid = f"n{self.next_id}"
            self.next_id += 1
            if nid not in self.nodes:
                return nid

    def node(self, node_id: str) -> ConceptNode:
        return self.nodes[node_id]

    def parent_map(self) -> dict[str, str]:
        parents: dict[str, str] = {}
        for node in self.nodes.values():
            for child in node.children:
                parents[child] = node.node_id
        return parents

    def ancestors(self, node_id: str, parents: dict[str, str] | None = None) -> list[str]:
        """Proper ancestors from parent up to the root."""
        parents = parents if parents is not None else self.parent_map()
        chain = []
        cur = node_id
        while cur in parents:
            cur = parents[cur]
            chain.append(cur)
        return chain

    def leaves(self) -> list[str]:
        return [n.node_id for n in self.nodes.values() if not n.children]

    def leaf_of_item(self, item_id: str) -> str | None:
        """The unique leaf whose extension holds the item, or None if uncovered."""
        if item_id not in self.nodes[self.root].items:
            return None
        cur = self.root
        while self.nodes[cur].children:
            for child in self.nodes[cur].children:
                if item_id in self.nodes[child].items:
                    cur = child
                    break
            else:
                return None  # uncovered by children: invalid tree
        return cur

    def deepest_node_containing(self, items: frozenset[str] | set[str]) -> str | None:
        """Deepest node whose extension contains every given item.

        Well defined because node extensions form a laminar family: the nodes
        containing a fixed set are a root-anchored chain.
        """
        if not items <= self.nodes[self.root].items:
            return None
        cur = self.root
        while True:
            for child in self.nodes[cur].children:
                if items <= self.nodes[child].items:
                    cur = child
                    break
            else:
                return cur

    def depth_map(self) -> dict[str, int]:
        depths = {self.root: 0}
        stack = [self.root]
        while stack:
            nid = stack.pop()
            for child in self.nodes[nid].children:
                depths[child] = depths[nid] + 1
                stack.append(child)
        return depths

    def copy(self) -> "Hierarchy":
        return Hierarchy(
            root=self.root,
            nodes={
                nid: ConceptNode(
                    node_id=n.node_id,
                    label=n.label,
                    children=list(n.children),
                    items=set(n.items),
                    is_pool=n.is_pool,
                )
                for nid, n in self.nodes.items()
            },
            next_id=self.next_id,
        )

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "next_id": self.next_id,
            "nodes": [self.nodes[nid].to_dict() for nid in sorted(self.nodes)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Hierarchy":
        nodes = {n["node_id"]: ConceptNode.from_dict(n) for n in d["nodes"]}
        return cls(root=d["root"], nodes=nodes, next_id=d.get("next_id", len(nodes)))

    def tree_dump(self, node_id: str | None = None) -> dict:
        """Nested dict view for reports and dashboards."""
        nid = node_id or self.root
        node = self.nodes[nid]
        return {
            "node_id": nid,
            "label": node.label,
            "is_pool": node.is_pool,
            "item_count": len(node.items),
            "items": sorted(node.items) if not node.children else None,
            "children": [self.tree_dump(c) for c in node.children],
        }


@dataclass(frozen=True)
class Frontier:
    """An antichain of hierarchy nodes. Complete when the node extensions cover
    every item the hierarchy covers (equivalently: partition them)."""

    nodes: frozenset[str]

    @classmethod
    def of(cls, node_ids: Iterable[str]) -> "Frontier":
        return cls(frozenset(node_ids))

    def to_dict(self) -> dict:
        return {"nodes": sorted(self.nodes)}

    @classmethod
    def from_dict(cls, d: dict) -> "Frontier":
        return cls.of(d["nodes"])


@dataclass
class Sample:
    """An item subset handed to workers, split into kernel items (already placed
    in the running hierarchy) and new items."""

    sample_id: str
    items: set[str]
    kernel: set[str]
    iteration: int

    def __post_init__(self):
        if not self.kernel <= self.items:
            raise ValueError("kernel must be a subset of the sample items")
        if self.iteration < 1:
            raise ValueError("iteration must be >= 1")
        if self.iteration == 1 and self.kernel:
            raise ValueError("the first iteration has an empty kernel")

    def new_items(self) -> set[str]:
        return self.items - self.kernel

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "items": sorted(self.items),
            "kernel": sorted(self.kernel),
            "iteration": self.iteration,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Sample":
        return cls(d["sample_id"], set(d["items"]), set(d["kernel"]), d["iteration"])


# Tunables. delta/f drive the sample-size solve, h is items per clustering task,
# m workers per clustering task, theta votes per categorization item.
@dataclass
class WorkflowConfig:
    delta: float = 0.95
    f: int = 16
    n: int | None = None  # solved from (delta, f) when unset
    h: int = 35
    m: int = 15
    theta: int = 5
    rng_seed: int = 0
    categorization_batch: int = 35
    pivots_per_cluster: int = 10

    def validate(self) -> None:
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        if self.f < 0:
            raise ValueError("f must be >= 0")
        if self.h <= self.f:
            raise ValueError("h must exceed f, otherwise the iteration count is undefined")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.theta < 1:
            raise ValueError("theta must be >= 1")
        if self.n is not None and self.n < 1:
            raise ValueError("n, when given, must be >= 1")
        if self.categorization_batch < 1 or self.pivots_per_cluster < 1:
            raise ValueError("batch and pivot sizes must be >= 1")

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "f": self.f,
            "n": self.n,
            "h": self.h,
            "m": self.m,
            "theta": self.theta,
            "rng_seed": self.rng_seed,
            "categorization_batch": self.categorization_batch,
            "pivots_per_cluster": self.pivots_per_cluster,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WorkflowConfig":
        return cls(**{k: d[k] for k in cls().to_dict() if k in d})


@dataclass
class Violation:
    code: str
    message: str
    item_ids: list[str] = field(default_factory=list)
    node_id: str | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.item_ids:
            d["item_ids"] = sorted(self.item_ids)
        if self.node_id is not None:
            d["node_id"] = self.node_id
        return d


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, item_ids: Iterable[str] = (), node_id: str | None = None) -> None:
        self.violations.append(Violation(code, message, sorted(item_ids), node_id))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def validate_clustering(c: Clustering, s: Sample) -> ValidationReport:
    """Check that `c` partitions `s.items`: pairwise-disjoint non-empty clusters
    whose union is exactly the sample."""
    report = ValidationReport()
    seen: set[str] = set()
    overlap: set[str] = set()
    for cluster in c.clusters:
        if not cluster:
            report.add("empty-cluster", "clusters must be non-empty")
        overlap |= cluster & seen
        seen |= cluster
    if overlap:
        report.add("overlap", "an item may belong to at most one cluster", overlap)
    missing = s.items - seen
    if missing:
        report.add("uncovered", "every sample item must be clustered", missing)
    extraneous = seen - s.items
    if extraneous:
        report.add("extraneous", "clusters may only contain sample items", extraneous)
    return report


def validate_hierarchy(t: Hierarchy) -> ValidationReport:
    """Check every structural invariant of a hierarchy: single root holding all
    covered items, tree shape, children partition their parent's extension,
    no empty concept, no single-child node, leaves partition the covered items."""
    report = ValidationReport()
    if t.root not in t.nodes:
        report.add("missing-root", f"root {t.root!r} not present")
        return report

    parents: dict[str, str] = {}
    for node in t.nodes.values():
        for child in node.children:
            if child not in t.nodes:
                report.add("dangling-child", f"{node.node_id} references missing child {child}", node_id=node.node_id)
                continue
            if child in parents:
                report.add("multi-parent", f"{child} has more than one parent", node_id=child)
            parents[child] = node.node_id

    # reachability / single tree
    reachable = {t.root}
    stack = [t.root]
    while stack:
        nid = stack.pop()
        for child in t.nodes[nid].children:
            if child in t.nodes and child not in reachable:
                reachable.add(child)
                stack.append(child)
    for nid in t.nodes:
        if nid not in reachable:
            report.add("unreachable", f"{nid} is not reachable from the root", node_id=nid)
    if t.root in parents:
        report.add("rooted", "the root may not have a parent", node_id=t.root)

    for node in t.nodes.values():
        if not node.items:
            report.add("empty-concept", f"{node.node_id} has no instances", node_id=node.node_id)
        if len(node.children) == 1:
            report.add("single-child", f"{node.node_id} has exactly one child", node_id=node.node_id)
        if node.children:
            union: set[str] = set()
            overlap: set[str] = set()
            for child in node.children:
                if child not in t.nodes:
                    continue
                child_items = t.nodes[child].items
                overlap |= union & child_items
                union |= child_items
            if overlap:
                report.add("child-overlap", f"children of {node.node_id} share instances", overlap, node.node_id)
            uncovered = node.items - union
            if uncovered:
                report.add("child-undercoverage", f"children of {node.node_id} do not cover it", uncovered, node.node_id)
            excess = union - node.items
            if excess:
                report.add("child-excess", f"children of {node.node_id} exceed its extension", excess, node.node_id)
    return report


def is_antichain(t: Hierarchy, node_ids: Iterable[str]) -> bool:
    ids = list(node_ids)
    parents = t.parent_map()
    id_set = set(ids)
    for nid in ids:
        for anc in t.ancestors(nid, parents):
            if anc in id_set:
                return False
    return True


def frontier_is_complete(t: Hierarchy, fr: Frontier) -> bool:
    """True iff the frontier's extensions cover (hence partition) every covered item."""
    for nid in fr.nodes:
        if nid not in t.nodes:
            raise ValueError(f"frontier node {nid!r} not in hierarchy")
    if not is_antichain(t, fr.nodes):
        raise ValueError("frontier is not an antichain")
    union: set[str] = set()
    for nid in fr.nodes:
        union |= t.nodes[nid].items
    return union == t.covered_items
