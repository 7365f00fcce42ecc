"""Shared builders: hand-built hierarchies, random valid hierarchies and
frontiers, and the mixed-granularity worked example used across suites."""

from __future__ import annotations

from random import Random

import pytest

from quorum.model import Clustering, ConceptNode, Hierarchy, ROOT_LABEL


def build_hierarchy(spec, next_id: int = 100) -> Hierarchy:
    """Build a hierarchy from a nested (label, children_or_items) spec, e.g.
    ("Universe", [("Polygons", [("Rectangles", ["i1"]), ...]), ...]). A leaf is
    (label, list-of-item-id-strings)."""
    nodes: dict[str, ConceptNode] = {}
    counter = [0]

    def walk(node_spec) -> str:
        label, inner = node_spec
        nid = f"n{counter[0]}"
        counter[0] += 1
        node = ConceptNode(node_id=nid, label=label)
        nodes[nid] = node
        if inner and isinstance(inner[0], str):
            node.items = set(inner)
        else:
            for child_spec in inner:
                child_id = walk(child_spec)
                node.children.append(child_id)
                node.items |= nodes[child_id].items
        return nid

    root = walk(spec)
    nodes[root].label = ROOT_LABEL
    return Hierarchy(root=root, nodes=nodes, next_id=max(next_id, counter[0]))


def random_hierarchy(rng: Random, items: list[str], max_fanout: int = 4, split_prob: float = 0.65) -> Hierarchy:
    """Random valid hierarchy over the given items (children 0 or >= 2)."""
    t = Hierarchy(root="n0", nodes={"n0": ConceptNode(node_id="n0", label=ROOT_LABEL, items=set(items))})
    t.next_id = 1

    def maybe_split(nid: str) -> None:
        node = t.nodes[nid]
        members = sorted(node.items)
        if len(members) < 2:
            return
        if nid != t.root and rng.random() > split_prob:
            return
        fanout = rng.randint(2, min(max_fanout, len(members)))
        shuffled = list(members)
        rng.shuffle(shuffled)
        # random composition into `fanout` non-empty blocks
        cuts = sorted(rng.sample(range(1, len(shuffled)), fanout - 1))
        blocks = []
        prev = 0
        for cut in cuts + [len(shuffled)]:
            blocks.append(shuffled[prev:cut])
            prev = cut
        for block in blocks:
            child = t.fresh_id()
            t.nodes[child] = ConceptNode(node_id=child, items=set(block))
            node.children.append(child)
        for child in list(node.children):
            maybe_split(child)

    if len(items) >= 2:
        maybe_split(t.root)
    return t


def random_complete_frontier(rng: Random, t: Hierarchy, descend_prob: float = 0.5) -> set[str]:
    """Random complete frontier by top-down coin flips (root always splits)."""
    frontier: set[str] = set()

    def walk(nid: str, is_root: bool) -> None:
        node = t.nodes[nid]
        if not node.children:
            frontier.add(nid)
        elif is_root or rng.random() < descend_prob:
            for c in node.children:
                walk(c, False)
        else:
            frontier.add(nid)

    walk(t.root, True)
    return frontier


def frontier_clustering(t: Hierarchy, frontier: set[str], worker_id: str, sample_id: str = "s") -> Clustering:
    return Clustering.from_lists(worker_id, sample_id, [sorted(t.nodes[nid].items) for nid in sorted(frontier)])


@pytest.fixture
def worked_example():
    """Eight items carrying shape and color, five worker clusterings at mixed
    granularities: 1-2 organize by color (coarse/fine), 3-5 by shape. The shape
    camp is the majority clique; its induced tree nests Quadrilaterals between
    the Universe and the Rectangles/Squares leaves."""
    items = {
        "i1": ("square", "azure"),
        "i2": ("rectangle", "dark-blue"),
        "i3": ("equilateral", "light-green"),
        "i4": ("scalene", "dark-green"),
        "i5": ("circle", "azure"),
        "i6": ("ellipse", "dark-green"),
        "i7": ("square", "dark-blue"),
        "i8": ("circle", "light-green"),
    }
    clusterings = [
        # 1: color, coarse
        [["i1", "i2", "i5", "i7"], ["i3", "i4", "i6", "i8"]],
        # 2: color, fine
        [["i1", "i5"], ["i2", "i7"], ["i3", "i8"], ["i4", "i6"]],
        # 3: shape, leaf level
        [["i2"], ["i1", "i7"], ["i3"], ["i4"], ["i5", "i8"], ["i6"]],
        # 4: shape, middle granularity
        [["i1", "i2", "i7"], ["i3", "i4"], ["i5", "i6", "i8"]],
        # 5: shape, mixed granularity
        [["i1", "i2", "i3", "i4", "i7"], ["i5", "i8"], ["i6"]],
    ]
    return items, [Clustering.from_lists(f"w{k + 1}", "s1", cs) for k, cs in enumerate(clusterings)]
