"""Partition comparison metrics: variation of information, normalized mutual
information, and the minimum number of ground-truth perspectives needed to
explain a clustering.

All entropies are base 2, so VI is reported in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .model import ItemCorpus
from .simulation import Perspective

Partition = Sequence[frozenset[str]]


def _as_partition(clusters: Iterable[Iterable[str]]) -> list[frozenset[str]]:
    part = [frozenset(c) for c in clusters]
    seen: set[str] = set()
    for c in part:
        if not c:
            raise ValueError("empty cluster")
        if c & seen:
            raise ValueError("clusters overlap")
        seen |= c
    return part


def _check_same_items(a: Partition, b: Partition) -> int:
    items_a = set().union(*a) if a else set()
    items_b = set().union(*b) if b else set()
    if items_a != items_b:
        raise ValueError("partitions must cover the same item set")
    return len(items_a)


def _entropy(part: Partition, n: int) -> float:
    return -sum((len(c) / n) * math.log2(len(c) / n) for c in part)


def _mutual_information(a: Partition, b: Partition, n: int) -> float:
    info = 0.0
    index_b = {}
    for j, cb in enumerate(b):
        for x in cb:
            index_b[x] = j
    for ca in a:
        counts: dict[int, int] = {}
        for x in ca:
            j = index_b[x]
            counts[j] = counts.get(j, 0) + 1
        pa = len(ca) / n
        for j, k in counts.items():
            pab = k / n
            pb = len(b[j]) / n
            info += pab * math.log2(pab / (pa * pb))
    return info


def variation_of_information(a: Iterable[Iterable[str]], b: Iterable[Iterable[str]]) -> float:
    """VI(a, b) = H(a) + H(b) - 2 I(a; b), in bits. Zero iff the partitions are
    identical; a true metric on partitions. Computed in the conditional-entropy
    form H(a|b) + H(b|a), whose terms vanish exactly on identical blocks."""
    pa, pb = _as_partition(a), _as_partition(b)
    n = _check_same_items(pa, pb)
    index_b = {}
    for j, cb in enumerate(pb):
        for x in cb:
            index_b[x] = j
    vi = 0.0
    for ca in pa:
        counts: dict[int, int] = {}
        for x in ca:
            j = index_b[x]
            counts[j] = counts.get(j, 0) + 1
        for j, k in counts.items():
            pij = k / n
            vi += pij * (math.log2(len(ca) / k) + math.log2(len(pb[j]) / k))
    return vi


def normalized_mutual_information(a: Iterable[Iterable[str]], b: Iterable[Iterable[str]]) -> float:
    """I(a;b) / sqrt(H(a) H(b)) in [0, 1]. When either entropy is zero the value
    is 1 for identical partitions and 0 otherwise."""
    pa, pb = _as_partition(a), _as_partition(b)
    n = _check_same_items(pa, pb)
    ha, hb = _entropy(pa, n), _entropy(pb, n)
    if ha == 0.0 or hb == 0.0:
        return 1.0 if {frozenset(c) for c in pa} == {frozenset(c) for c in pb} else 0.0
    nmi = _mutual_information(pa, pb, n) / math.sqrt(ha * hb)
    return min(max(nmi, 0.0), 1.0)


@dataclass
class HierarchyCountResult:
    """Minimum number of perspectives explaining a clustering; clusters that no
    perspective combination makes homogeneous are listed as unexplained."""

    count: int
    perspectives_used: list[str] = field(default_factory=list)
    unexplained_clusters: list[int] = field(default_factory=list)

    @property
    def explainable(self) -> bool:
        return not self.unexplained_clusters

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "perspectives_used": self.perspectives_used,
            "unexplained_clusters": self.unexplained_clusters,
        }


def cluster_is_homogeneous(cluster: frozenset[str], corpus: ItemCorpus, p: Perspective) -> bool:
    """True when every item shares a concept below the perspective's root, at
    any granularity of its label tree."""
    labels = set()
    for item_id in cluster:
        gt = corpus.items[item_id].ground_truth_labels
        if not gt or p.name not in gt:
            return False
        labels.add(gt[p.name])
    return p.lowest_common_label(labels) is not None


def clustering_hierarchy_count(
    clusters: Iterable[Iterable[str]],
    corpus: ItemCorpus,
    perspectives: list[Perspective],
) -> HierarchyCountResult:
    """Smallest perspective subset under which every cluster is homogeneous in
    at least one chosen perspective (exhaustive over subsets; the perspective
    count is tiny in practice). Unexplainable clusterings report all
    perspectives plus the offending clusters."""
    part = _as_partition(clusters)
    if not perspectives:
        raise ValueError("need at least one perspective")
    homogeneous: dict[int, set[str]] = {
        i: {p.name for p in perspectives if cluster_is_homogeneous(c, corpus, p)}
        for i, c in enumerate(part)
    }
    names = [p.name for p in perspectives]
    for r in range(1, len(names) + 1):
        for combo in combinations(names, r):
            chosen = set(combo)
            if all(homogeneous[i] & chosen for i in range(len(part))):
                return HierarchyCountResult(count=r, perspectives_used=list(combo))
    unexplained = [i for i in range(len(part)) if not homogeneous[i]]
    return HierarchyCountResult(
        count=len(names),
        perspectives_used=names,
        unexplained_clusters=unexplained,
    )
