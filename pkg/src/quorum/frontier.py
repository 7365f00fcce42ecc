"""Maximum-likelihood complete frontier of a hierarchy from worker frontier
responses, plus categorization-phase helpers (pivot selection, vote plurality).

For node v with parent u, p(not-split v | split u) is estimated as the number of
workers whose frontier contains v over the number whose frontier contains v or
a descendant of v. Unobserved nodes default to 1/2 (maximum entropy); the root
split probability is pinned to 1. The best complete frontier maximizes, in log
space, D(v) = max(p_stop(v), p_split(v) * prod D(children)); ties prefer
stopping (coarser frontiers cost less to categorize against).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from random import Random

from .model import Clustering, Frontier, Hierarchy, is_antichain


@dataclass
class SplitStats:
    """Per-node response counts and the derived stop probabilities."""

    frontier_count: dict[str, int]
    subtree_count: dict[str, int]
    not_split_prob: dict[str, float]
    responses_used: int = 0


@dataclass
class FrontierLikelihood:
    frontier: Frontier
    log_likelihood: float

    def to_dict(self) -> dict:
        return {"nodes": sorted(self.frontier.nodes), "log_likelihood": self.log_likelihood}


def estimate_split_probabilities(t: Hierarchy, responses: list[Frontier]) -> SplitStats:
    """Count, per node, how many responses stop at it vs pass through it, and
    derive stop probabilities. Responses may cover only part of the hierarchy
    (frontiers of sample subtrees); each must be an antichain."""
    parents = t.parent_map()
    frontier_count: dict[str, int] = {nid: 0 for nid in t.nodes}
    subtree_count: dict[str, int] = {nid: 0 for nid in t.nodes}
    for fr in responses:
        for nid in fr.nodes:
            if nid not in t.nodes:
                raise ValueError(f"response references unknown node {nid!r}")
        if not is_antichain(t, fr.nodes):
            raise ValueError("response frontier is not an antichain")
        touched: set[str] = set()
        for nid in fr.nodes:
            frontier_count[nid] += 1
            touched.add(nid)
            touched.update(t.ancestors(nid, parents))
        for nid in touched:
            subtree_count[nid] += 1

    not_split: dict[str, float] = {}
    root_is_leaf = not t.nodes[t.root].children
    for nid in t.nodes:
        if nid == t.root:
            # The root is always entered; it never competes as a frontier of its
            # own unless it is the only node.
            not_split[nid] = 1.0 if root_is_leaf else 0.0
        elif subtree_count[nid] == 0:
            not_split[nid] = 0.5
        else:
            not_split[nid] = frontier_count[nid] / subtree_count[nid]
    return SplitStats(
        frontier_count=frontier_count,
        subtree_count=subtree_count,
        not_split_prob=not_split,
        responses_used=len(responses),
    )


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else float("-inf")


def max_likelihood_frontier(t: Hierarchy, stats: SplitStats) -> FrontierLikelihood:
    """Best complete frontier under the split-probability factorization,
    computed bottom-up in log space. Leaves always stop."""
    best: dict[str, float] = {}
    stop_here: dict[str, bool] = {}

    for nid in _postorder(t):
        node = t.nodes[nid]
        p_stop = stats.not_split_prob[nid]
        log_stop = _log(p_stop)
        if not node.children:
            best[nid] = log_stop
            stop_here[nid] = True
            continue
        log_descend = _log(1.0 - p_stop) + sum(best[c] for c in node.children)
        if log_stop >= log_descend:
            best[nid] = log_stop
            stop_here[nid] = True
        else:
            best[nid] = log_descend
            stop_here[nid] = False

    nodes: set[str] = set()
    stack = [t.root]
    while stack:
        nid = stack.pop()
        if stop_here[nid]:
            nodes.add(nid)
        else:
            stack.extend(t.nodes[nid].children)
    return FrontierLikelihood(frontier=Frontier.of(nodes), log_likelihood=best[t.root])


def _postorder(t: Hierarchy) -> list[str]:
    order: list[str] = []
    stack: list[tuple[str, bool]] = [(t.root, False)]
    while stack:
        nid, expanded = stack.pop()
        if expanded:
            order.append(nid)
        else:
            stack.append((nid, True))
            for c in t.nodes[nid].children:
                stack.append((c, False))
    return order


def enumerate_complete_frontiers(t: Hierarchy, node_id: str | None = None) -> list[frozenset[str]]:
    """Every complete frontier of the subtree rooted at node_id. Exponential;
    used as the brute-force oracle on small trees."""
    nid = node_id or t.root
    node = t.nodes[nid]
    result = [frozenset([nid])]
    if node.children:
        combos: list[frozenset[str]] = [frozenset()]
        for child in node.children:
            child_frontiers = enumerate_complete_frontiers(t, child)
            combos = [acc | f for acc in combos for f in child_frontiers]
        result.extend(combos)
    return result


def frontier_log_likelihood(t: Hierarchy, stats: SplitStats, nodes: frozenset[str]) -> float:
    """Direct evaluation of the likelihood of a complete frontier: stop factors
    on frontier nodes, split factors on every proper ancestor above them."""
    parents = t.parent_map()
    total = 0.0
    ancestors: set[str] = set()
    for nid in nodes:
        total += _log(stats.not_split_prob[nid])
        ancestors.update(t.ancestors(nid, parents))
    for anc in ancestors:
        total += _log(1.0 - stats.not_split_prob[anc])
    return total


def project_clustering(t: Hierarchy, c: Clustering) -> Frontier | None:
    """Express a worker clustering as a frontier of `t` by mapping each cluster
    to the deepest node containing it. Returns None when the clustering is not
    representable (a cluster escapes coverage, two clusters share a node, or
    the images are not an antichain)."""
    images: list[str] = []
    for cluster in c.clusters:
        nid = t.deepest_node_containing(cluster)
        if nid is None:
            return None
        images.append(nid)
    if len(set(images)) != len(images):
        return None
    if not is_antichain(t, images):
        return None
    return Frontier.of(images)


def aggregate_categorization_votes(
    item_id: str,
    votes: list[str | None],
    theta: int,
    frontier_order: list[str],
) -> str | None:
    """Plurality winner of theta votes for one item. Ties break to the earliest
    created frontier cluster; abstentions (None) carry no weight; all-abstain
    yields None (uncategorizable)."""
    if len(votes) != theta:
        raise ValueError(f"expected {theta} votes for {item_id}, got {len(votes)}")
    valid = set(frontier_order)
    cast = [v for v in votes if v is not None]
    for v in cast:
        if v not in valid:
            raise ValueError(f"vote for unknown cluster {v!r}")
    if not cast:
        return None
    counts = Counter(cast)
    top = max(counts.values())
    rank = {nid: i for i, nid in enumerate(frontier_order)}
    return min((nid for nid, k in counts.items() if k == top), key=lambda nid: rank[nid])


def select_pivots(
    t: Hierarchy,
    fr: Frontier,
    per_cluster: int,
    rng: Random,
) -> dict[str, list[str]]:
    """Up to per_cluster exemplar items sampled uniformly from each frontier
    cluster, deterministic under a seeded rng."""
    pivots: dict[str, list[str]] = {}
    for nid in sorted(fr.nodes):
        members = sorted(t.nodes[nid].items)
        if not members:
            raise ValueError(f"frontier node {nid} has no items")
        pivots[nid] = sorted(rng.sample(members, min(per_cluster, len(members))))
    return pivots
