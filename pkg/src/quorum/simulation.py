"""Synthetic corpora with controllable latent organizations and a stochastic
worker model, for desk-scale experiments without a human crowd.

Items carry one ground-truth leaf label per perspective (e.g. shape / color /
size). A simulated worker first draws a perspective from the model's weights,
restricts that perspective's label tree to the sample, picks a complete
frontier by top-down coin flips (the root always splits), and reports the
induced partition; optional relocation noise moves items to random clusters.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from random import Random

from .model import Clustering, Item, ItemCorpus, Sample


@dataclass(frozen=True)
class LabelTree:
    """A label and its sub-labels; leaves are the labels items actually carry."""

    label: str
    children: tuple["LabelTree", ...] = ()

    @classmethod
    def of(cls, label: str, children: list | tuple = ()) -> "LabelTree":
        return cls(label, tuple(c if isinstance(c, LabelTree) else cls.parse(c) for c in children))

    @classmethod
    def parse(cls, spec) -> "LabelTree":
        """Accepts 'Label', ('Label', [children...]) or {'label':, 'children':}."""
        if isinstance(spec, LabelTree):
            return spec
        if isinstance(spec, str):
            return cls(spec)
        if isinstance(spec, dict):
            return cls.of(spec["label"], spec.get("children", ()))
        label, children = spec
        return cls.of(label, children)

    def leaf_labels(self) -> list[str]:
        if not self.children:
            return [self.label]
        out: list[str] = []
        for c in self.children:
            out.extend(c.leaf_labels())
        return out

    def ancestry(self) -> dict[str, list[str]]:
        """leaf label -> [leaf, ..., root] label chain."""
        chains: dict[str, list[str]] = {}

        def walk(node: "LabelTree", path: list[str]) -> None:
            here = path + [node.label]
            if not node.children:
                chains[node.label] = list(reversed(here))
            for c in node.children:
                walk(c, here)

        walk(self, [])
        return chains

    def to_dict(self) -> dict:
        return {"label": self.label, "children": [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class Perspective:
    """A named latent organization: a label tree whose root spans the corpus."""

    name: str
    tree: LabelTree

    def lowest_common_label(self, labels: set[str]) -> str | None:
        """Deepest tree label that is an ancestor-or-self of every given leaf
        label, or None when only the root spans them (no proper concept)."""
        chains = self.tree.ancestry()
        first, *rest = sorted(labels)
        chain = chains[first]  # leaf..root
        common = set(chain)
        for lb in rest:
            common &= set(chains[lb])
        for lb in chain:
            if lb in common:
                return None if lb == self.tree.label else lb
        return None

    def to_dict(self) -> dict:
        return {"name": self.name, "tree": self.tree.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Perspective":
        return cls(name=d["name"], tree=LabelTree.parse(d["tree"]))


SHAPE_TREE = LabelTree.of(
    "shape",
    [
        ("Polygons", [("Quadrilaterals", ["Rectangles", "Squares"]), ("Triangles", ["Equilateral", "Scalene"])]),
        ("Round", ["Circles", "Ellipses"]),
    ],
)
COLOR_LABELS = ["Red", "Blue", "Green", "Cyan", "Pink", "Yellow"]
SIZE_LABELS = ["Small", "Big"]


@dataclass
class ShapesSpec:
    """Corpus spec: a shape label tree plus flat color and size label sets."""

    shapes: LabelTree = SHAPE_TREE
    colors: list[str] = field(default_factory=lambda: list(COLOR_LABELS))
    sizes: list[str] = field(default_factory=lambda: list(SIZE_LABELS))
    count: int = 25

    def perspectives(self) -> list[Perspective]:
        return [
            Perspective("shape", self.shapes),
            Perspective("color", LabelTree.of("color", self.colors)),
            Perspective("size", LabelTree.of("size", self.sizes)),
        ]


def generate_shapes_corpus(spec: ShapesSpec, rng: Random, name: str = "shapes") -> ItemCorpus:
    """Items with independent uniform (shape, color, size) draws; the payload is
    the attribute record a worker would see rendered."""
    if spec.count < 1:
        raise ValueError("count must be >= 1")
    shape_leaves = spec.shapes.leaf_labels()
    width = len(str(spec.count))
    items = []
    for i in range(spec.count):
        labels = {
            "shape": rng.choice(shape_leaves),
            "color": rng.choice(spec.colors),
            "size": rng.choice(spec.sizes),
        }
        items.append(
            Item(
                item_id=f"item-{i:0{width}d}",
                payload=dict(labels),
                ground_truth_labels=labels,
            )
        )
    return ItemCorpus.from_items(name, items)


def generate_flat_corpus(
    concepts: list[str],
    count: int,
    rng: Random,
    name: str = "flat",
    perspective_name: str = "category",
) -> ItemCorpus:
    """A corpus with a single flat ground-truth organization over `concepts`."""
    if count < 1:
        raise ValueError("count must be >= 1")
    width = len(str(count))
    items = []
    for i in range(count):
        label = rng.choice(concepts)
        items.append(
            Item(
                item_id=f"item-{i:0{width}d}",
                payload={perspective_name: label},
                ground_truth_labels={perspective_name: label},
            )
        )
    return ItemCorpus.from_items(name, items)


def flat_perspective(concepts: list[str], perspective_name: str = "category") -> Perspective:
    return Perspective(perspective_name, LabelTree.of(perspective_name, concepts))


@dataclass
class WorkerModel:
    """Stochastic worker: perspective weights, the per-node probability of
    drilling below a non-root node when choosing a frontier, and i.i.d.
    relocation noise."""

    perspectives: list[Perspective]
    hierarchy_weights: list[float]
    split_probability: float = 0.5
    noise_rate: float = 0.0

    def __post_init__(self):
        if len(self.perspectives) != len(self.hierarchy_weights):
            raise ValueError("one weight per perspective required")
        if abs(sum(self.hierarchy_weights) - 1.0) > 1e-9:
            raise ValueError("hierarchy weights must sum to 1")
        for w in self.hierarchy_weights:
            if w < 0:
                raise ValueError("weights must be non-negative")
        if not (0.0 <= self.split_probability <= 1.0):
            raise ValueError("split_probability must lie in [0, 1]")
        if not (0.0 <= self.noise_rate <= 1.0):
            raise ValueError("noise_rate must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "perspectives": [p.to_dict() for p in self.perspectives],
            "hierarchy_weights": list(self.hierarchy_weights),
            "split_probability": self.split_probability,
            "noise_rate": self.noise_rate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WorkerModel":
        return cls(
            perspectives=[Perspective.from_dict(p) for p in d["perspectives"]],
            hierarchy_weights=list(d["hierarchy_weights"]),
            split_probability=d.get("split_probability", 0.5),
            noise_rate=d.get("noise_rate", 0.0),
        )


def default_shapes_worker_model(
    spec: ShapesSpec | None = None,
    split_probability: float = 0.5,
    noise_rate: float = 0.0,
) -> WorkerModel:
    """The stylized-experiment mix: 85% shape, 10% color, 5% size."""
    spec = spec or ShapesSpec()
    return WorkerModel(
        perspectives=spec.perspectives(),
        hierarchy_weights=[0.85, 0.10, 0.05],
        split_probability=split_probability,
        noise_rate=noise_rate,
    )


def worker_rng(run_seed: int, worker_id: str) -> Random:
    """Independent, reproducible stream per (run, worker)."""
    digest = hashlib.sha256(f"{run_seed}|{worker_id}".encode()).digest()
    return Random(int.from_bytes(digest[:8], "big"))


@dataclass(frozen=True)
class _Restricted:
    """A perspective tree restricted to a sample: nested (extension, children)."""

    items: frozenset[str]
    children: tuple["_Restricted", ...]


def _restrict(tree: LabelTree, member_of: dict[str, set[str]]) -> _Restricted | None:
    """Drop empty concepts and collapse single-child chains so the restriction
    is a proper hierarchy of the sample."""
    extension = member_of.get(tree.label, set())
    if not extension:
        return None
    kids = [r for r in (_restrict(c, member_of) for c in tree.children) if r is not None]
    if len(kids) == 1:
        return kids[0]
    return _Restricted(items=frozenset(extension), children=tuple(kids))


def _label_extensions(p: Perspective, sample_items: set[str], corpus: ItemCorpus) -> dict[str, set[str]]:
    chains = p.tree.ancestry()
    member_of: dict[str, set[str]] = {}
    for item_id in sample_items:
        labels = corpus.items[item_id].ground_truth_labels
        if not labels or p.name not in labels:
            raise ValueError(f"item {item_id} lacks a ground-truth label for {p.name!r}")
        for lb in chains[labels[p.name]]:
            member_of.setdefault(lb, set()).add(item_id)
    return member_of


def simulate_worker_clustering(
    model: WorkerModel,
    sample: Sample,
    corpus: ItemCorpus,
    rng: Random,
    worker_id: str = "sim",
) -> Clustering:
    """Draw a perspective, choose a complete frontier of its restriction to the
    sample by top-down coin flips, emit the induced partition, then apply
    relocation noise."""
    r = rng.random()
    acc = 0.0
    perspective = model.perspectives[-1]
    for p, w in zip(model.perspectives, model.hierarchy_weights):
        acc += w
        if r < acc:
            perspective = p
            break

    member_of = _label_extensions(perspective, sample.items, corpus)
    root = _restrict(perspective.tree, member_of)
    assert root is not None  # samples are non-empty

    clusters: list[set[str]] = []

    def descend(node: _Restricted, is_root: bool) -> None:
        if not node.children:
            clusters.append(set(node.items))
            return
        if is_root or rng.random() < model.split_probability:
            for c in node.children:
                descend(c, False)
        else:
            clusters.append(set(node.items))

    descend(root, True)

    if model.noise_rate > 0.0 and len(clusters) > 1:
        for item_id in sorted(sample.items):
            if rng.random() < model.noise_rate:
                src = next(i for i, c in enumerate(clusters) if item_id in c)
                others = [i for i in range(len(clusters)) if i != src]
                dst = rng.choice(others)
                clusters[src].discard(item_id)
                clusters[dst].add(item_id)
        clusters = [c for c in clusters if c]

    return Clustering.from_lists(worker_id, sample.sample_id, clusters)


def simulate_categorization_vote(
    model: WorkerModel,
    item: Item,
    pivots: dict[str, list[str]],
    corpus: ItemCorpus,
    rng: Random,
) -> str | None:
    """Vote for the pivot cluster whose exemplars share the item's concept under
    the dominant pivot perspective (the perspective making the most pivot sets
    label-homogeneous). Falls back to the nearest discovered ancestor concept;
    abstains (None) when no pivot cluster relates to the item at all. Noise
    replaces the vote with a uniformly random cluster."""
    if not pivots:
        raise ValueError("pivots must be non-empty")
    cluster_ids = sorted(pivots)
    if model.noise_rate > 0.0 and rng.random() < model.noise_rate:
        return rng.choice(cluster_ids)
    if len(cluster_ids) == 1:
        return cluster_ids[0]

    def pivot_labels(p: Perspective, cid: str) -> set[str]:
        labels = set()
        for pid in pivots[cid]:
            gt = corpus.items[pid].ground_truth_labels or {}
            if p.name not in gt:
                return set()
            labels.add(gt[p.name])
        return labels

    best: tuple[int, float] | None = None
    dominant: Perspective | None = None
    concepts: dict[str, str] = {}
    for p, w in zip(model.perspectives, model.hierarchy_weights):
        homogeneous = 0
        candidate_concepts: dict[str, str] = {}
        for cid in cluster_ids:
            labels = pivot_labels(p, cid)
            concept = p.lowest_common_label(labels) if labels else None
            if concept is not None:
                homogeneous += 1
                candidate_concepts[cid] = concept
        score = (homogeneous, w)
        if best is None or score > best:
            best, dominant, concepts = score, p, candidate_concepts

    assert dominant is not None
    gt = item.ground_truth_labels or {}
    if dominant.name not in gt:
        return None
    chain = dominant.tree.ancestry()[gt[dominant.name]]  # leaf..root
    depth = {lb: len(chain) - i for i, lb in enumerate(chain)}
    matches = [(depth[concepts[cid]], cid) for cid in cluster_ids if concepts.get(cid) in depth]
    if not matches:
        return None
    matches.sort(key=lambda pair: (-pair[0], pair[1]))
    return matches[0][1]


def load_worker_model(path: str) -> WorkerModel:
    with open(path, encoding="utf-8") as fh:
        return WorkerModel.from_dict(json.load(fh))


def load_corpus(path: str) -> ItemCorpus:
    with open(path, encoding="utf-8") as fh:
        return ItemCorpus.from_dict(json.load(fh))
