import math
from collections import Counter
from random import Random

import pytest

from quorum.metrics import (
    clustering_hierarchy_count,
    normalized_mutual_information,
    variation_of_information,
)
from quorum.model import Item, ItemCorpus
from quorum.simulation import ShapesSpec, flat_perspective

from properties import _random_partition, check_vi_metric_axioms


def contingency_oracle(a, b):
    """Direct contingency-table VI: H(a) + H(b) - 2 I, computed from joint
    cluster-membership frequencies."""
    a = [frozenset(c) for c in a]
    b = [frozenset(c) for c in b]
    n = sum(len(c) for c in a)
    joint = Counter()
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            k = len(ca & cb)
            if k:
                joint[(i, j)] = k
    h_a = -sum((len(c) / n) * math.log2(len(c) / n) for c in a)
    h_b = -sum((len(c) / n) * math.log2(len(c) / n) for c in b)
    info = sum(
        (k / n) * math.log2((k / n) / ((len(a[i]) / n) * (len(b[j]) / n)))
        for (i, j), k in joint.items()
    )
    return h_a + h_b - 2 * info


class TestVariationOfInformation:
    def test_identical_partitions(self):
        part = [["x1", "x2"], ["x3"]]
        assert variation_of_information(part, part) == 0.0

    def test_split_against_lump_is_one_bit(self):
        a = [["x1", "x2"], ["x3", "x4"]]
        b = [["x1", "x2", "x3", "x4"]]
        assert variation_of_information(a, b) == pytest.approx(1.0)

    def test_matches_contingency_oracle(self):
        rng = Random(50)
        for _ in range(200):
            items = [f"x{i}" for i in range(rng.randint(2, 20))]
            a = _random_partition(rng, items)
            b = _random_partition(rng, items)
            assert variation_of_information(a, b) == pytest.approx(contingency_oracle(a, b), abs=1e-9)

    def test_mismatched_item_sets_rejected(self):
        with pytest.raises(ValueError):
            variation_of_information([["a"]], [["b"]])


class TestNormalizedMutualInformation:
    def test_identical_nontrivial(self):
        part = [["x1", "x2"], ["x3", "x4"], ["x5"]]
        assert normalized_mutual_information(part, part) == pytest.approx(1.0)

    def test_independent_partitions_near_zero(self):
        rng = Random(51)
        items = [f"x{i}" for i in range(400)]
        total = 0.0
        for _ in range(100):
            a = [[x for x in items if rng.random() < 0.5]]
            a.append([x for x in items if x not in a[0]])
            a = [c for c in a if c]
            b = [[x for x in items if rng.random() < 0.5]]
            b.append([x for x in items if x not in b[0]])
            b = [c for c in b if c]
            total += normalized_mutual_information(a, b)
        assert total / 100 < 0.05

    def test_single_cluster_degenerate_zero(self):
        a = [["x1", "x2", "x3"]]
        b = [["x1"], ["x2", "x3"]]
        assert normalized_mutual_information(a, b) == 0.0

    def test_identical_trivial_is_one(self):
        a = [["x1", "x2", "x3"]]
        assert normalized_mutual_information(a, a) == 1.0


def labeled_corpus(rows):
    """rows: (item_id, shape_leaf, color, size)"""
    return ItemCorpus.from_items(
        "c",
        [
            Item(i, ground_truth_labels={"shape": sh, "color": co, "size": sz})
            for i, sh, co, sz in rows
        ],
    )


PERSPECTIVES = ShapesSpec().perspectives()


class TestHierarchyCount:
    def test_leaf_partition_needs_one(self):
        corpus = labeled_corpus(
            [
                ("i1", "Squares", "Red", "Big"),
                ("i2", "Squares", "Blue", "Small"),
                ("i3", "Circles", "Red", "Small"),
                ("i4", "Circles", "Green", "Big"),
            ]
        )
        result = clustering_hierarchy_count([["i1", "i2"], ["i3", "i4"]], corpus, PERSPECTIVES)
        assert result.count == 1 and result.perspectives_used == ["shape"]

    def test_coarse_granularity_still_one(self):
        corpus = labeled_corpus(
            [
                ("i1", "Squares", "Red", "Big"),
                ("i2", "Rectangles", "Blue", "Small"),
                ("i3", "Scalene", "Red", "Small"),
                ("i4", "Circles", "Green", "Big"),
            ]
        )
        # {Polygons, Round} granularity
        result = clustering_hierarchy_count([["i1", "i2", "i3"], ["i4"]], corpus, PERSPECTIVES)
        assert result.count == 1

    def test_mixed_principles_need_two(self):
        # ellipses grouped across sizes (shape only explains them); the other
        # clusters cut across the polygon/round boundary by size (size only
        # explains them): one principle alone cannot explain the clustering
        corpus = labeled_corpus(
            [
                ("i1", "Ellipses", "Red", "Big"),
                ("i2", "Ellipses", "Blue", "Small"),
                ("i3", "Squares", "Red", "Small"),
                ("i4", "Circles", "Green", "Small"),
                ("i5", "Scalene", "Blue", "Big"),
                ("i6", "Circles", "Red", "Big"),
            ]
        )
        clusters = [["i1", "i2"], ["i3", "i4"], ["i5", "i6"]]
        result = clustering_hierarchy_count(clusters, corpus, PERSPECTIVES)
        assert result.count == 2
        assert set(result.perspectives_used) == {"shape", "size"}
        assert result.explainable

    def test_singletons_need_one(self):
        corpus = labeled_corpus(
            [
                ("i1", "Squares", "Red", "Big"),
                ("i2", "Squares", "Red", "Big"),
                ("i3", "Circles", "Blue", "Small"),
            ]
        )
        result = clustering_hierarchy_count([["i1"], ["i2"], ["i3"]], corpus, PERSPECTIVES)
        assert result.count == 1

    def test_unexplainable_cluster_flagged(self):
        corpus = labeled_corpus(
            [
                ("i1", "Squares", "Red", "Big"),
                ("i2", "Circles", "Blue", "Small"),
                ("i3", "Scalene", "Green", "Big"),
            ]
        )
        # one cluster mixing labels in every perspective
        result = clustering_hierarchy_count([["i1", "i2"], ["i3"]], corpus, PERSPECTIVES)
        assert not result.explainable
        assert result.count == len(PERSPECTIVES)
        assert result.unexplained_clusters == [0]

    def test_flat_perspective_requires_equal_labels(self):
        concepts = ["a", "b"]
        corpus = ItemCorpus.from_items(
            "c",
            [
                Item("i1", ground_truth_labels={"category": "a"}),
                Item("i2", ground_truth_labels={"category": "a"}),
                Item("i3", ground_truth_labels={"category": "b"}),
            ],
        )
        p = [flat_perspective(concepts)]
        assert clustering_hierarchy_count([["i1", "i2"], ["i3"]], corpus, p).count == 1
        assert not clustering_hierarchy_count([["i1", "i3"], ["i2"]], corpus, p).explainable


def test_property_vi_metric_axioms():
    check_vi_metric_axioms(300)
