"""Merge a per-sample hierarchy into the running consensus estimate using the
sample's kernel items as anchors.

Every leaf of the sample hierarchy is mapped into the estimate:

* leaves holding kernel items map to the lowest common ancestor of the kernel
  items' leaves — new items descend into that leaf when the kernel sits in a
  single leaf, and are parked in a pool child when it spans several (the worker
  clustered coarser than the estimate, so no single leaf can be attributed);
* kernel-free leaves are new concepts and attach as a fresh child under the
  mapped image of their lowest kernel-bearing ancestor.

Targets are resolved against the estimate *before* any mutation, so several new
concepts mapping to one target attach as siblings. When an attachment target is
itself a leaf, the leaf is split once: its existing items move intact into a
fresh child (which inherits the label), keeping the children-partition and
no-single-child invariants. Item blocks are never reshuffled: a merge only adds
items to concepts or deepens the node housing an existing block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import ConceptNode, Hierarchy


@dataclass
class MergeDecision:
    """One mapping decision, for the audit trace."""

    sample_leaf_items: list[str]
    kernel_items: list[str]
    action: str  # descend | park | attach | noop
    target: str
    created: str | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "sample_leaf_items": self.sample_leaf_items,
            "kernel_items": self.kernel_items,
            "action": self.action,
            "target": self.target,
            "created": self.created,
            "note": self.note,
        }


def lowest_common_ancestor(t: Hierarchy, node_ids: Iterable[str]) -> str:
    """Deepest node that is an ancestor-or-self of every given node."""
    ids = list(node_ids)
    if not ids:
        raise ValueError("need at least one node")
    for nid in ids:
        if nid not in t.nodes:
            raise ValueError(f"unknown node {nid!r}")
    parents = t.parent_map()
    chain = [ids[0]] + t.ancestors(ids[0], parents)
    height = {nid: i for i, nid in enumerate(chain)}  # 0 = deepest
    best = 0
    for nid in ids[1:]:
        cur = nid
        while cur not in height:
            cur = parents[cur]
        best = max(best, height[cur])
    return chain[best]


@dataclass
class _Resolution:
    leaf_id: str
    items: set[str]
    kernel_items: set[str]
    new_items: set[str]
    action: str
    target: str


def merge_hierarchies(
    t: Hierarchy,
    ts: Hierarchy,
    kernel: set[str],
    trace: list[MergeDecision] | None = None,
) -> Hierarchy:
    """Return a new hierarchy extending `t` with the sample hierarchy `ts`,
    anchored on `kernel` (one previously-placed item per leaf of `t`). Inputs
    are not mutated."""
    if not kernel:
        raise ValueError("merging requires a non-empty kernel")
    if not kernel <= t.covered_items:
        raise ValueError("kernel items must already be covered by the estimate")
    if not kernel <= ts.covered_items:
        raise ValueError("kernel items must be part of the sample hierarchy")

    covered = t.covered_items

    # Phase 1: resolve every sample leaf against the pristine estimate.
    ts_parents = ts.parent_map()
    resolutions: list[_Resolution] = []
    ordered_leaves = sorted(ts.leaves(), key=lambda nid: sorted(ts.nodes[nid].items))
    for leaf_id in ordered_leaves:
        leaf_items = set(ts.nodes[leaf_id].items)
        k_i = leaf_items & kernel
        new_items = leaf_items - covered
        if k_i:
            anchor_leaves = {t.leaf_of_item(x) for x in k_i}
            target = lowest_common_ancestor(t, sorted(anchor_leaves))  # type: ignore[arg-type]
            action = "descend" if not t.nodes[target].children else "park"
        else:
            anc = ts_parents.get(leaf_id)
            while anc is not None and not (ts.nodes[anc].items & kernel):
                anc = ts_parents.get(anc)
            if anc is None:
                raise ValueError(
                    "sample leaf has no kernel-bearing ancestor; the sample root "
                    "must contain the kernel"
                )
            k_a = ts.nodes[anc].items & kernel
            anchor_leaves = {t.leaf_of_item(x) for x in k_a}
            target = lowest_common_ancestor(t, sorted(anchor_leaves))  # type: ignore[arg-type]
            action = "attach"
        resolutions.append(_Resolution(leaf_id, leaf_items, k_i, new_items, action, target))

    # Phase 2: apply to a copy — descents and parkings first, then attachments.
    out = t.copy()
    out_parents = out.parent_map()

    def add_items_at(node_id: str, items: set[str]) -> None:
        out.nodes[node_id].items |= items
        for anc in out.ancestors(node_id, out_parents):
            out.nodes[anc].items |= items

    def record(res: _Resolution, action: str, created: str | None = None, note: str = "") -> None:
        if trace is not None:
            trace.append(
                MergeDecision(
                    sample_leaf_items=sorted(res.items),
                    kernel_items=sorted(res.kernel_items),
                    action=action,
                    target=res.target,
                    created=created,
                    note=note,
                )
            )

    for res in resolutions:
        if res.action not in ("descend", "park"):
            continue
        if not res.new_items:
            record(res, "noop", note="no new items")
            continue
        if res.action == "descend":
            add_items_at(res.target, res.new_items)
            record(res, "descend")
        else:
            pool = next(
                (c for c in out.nodes[res.target].children if out.nodes[c].is_pool),
                None,
            )
            if pool is None:
                pool = out.fresh_id()
                out.nodes[pool] = ConceptNode(node_id=pool, is_pool=True)
                out.nodes[res.target].children.append(pool)
                out_parents[pool] = res.target
            out.nodes[pool].items |= res.new_items
            add_items_at(res.target, res.new_items)
            record(res, "park", created=pool, note="kernel spans several leaves")

    for res in resolutions:
        if res.action != "attach":
            continue
        if not res.new_items:
            record(res, "noop", note="new concept already covered")
            continue
        target_node = out.nodes[res.target]
        note = ""
        if not target_node.children:
            # Splitting keeps the partition invariant: the target's current
            # items move intact into a fresh child that inherits its identity.
            core = out.fresh_id()
            out.nodes[core] = ConceptNode(
                node_id=core,
                label=target_node.label,
                items=set(target_node.items),
                is_pool=target_node.is_pool,
            )
            target_node.children.append(core)
            target_node.label = None
            target_node.is_pool = False
            out_parents[core] = res.target
            note = f"target was a leaf; existing items moved to {core}"
        fresh = out.fresh_id()
        out.nodes[fresh] = ConceptNode(node_id=fresh, items=set(res.new_items))
        target_node.children.append(fresh)
        out_parents[fresh] = res.target
        add_items_at(res.target, res.new_items)
        record(res, "attach", created=fresh, note=note)

    return out
