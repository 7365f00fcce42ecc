from random import Random

import pytest

from quorum.model import (
    Clustering,
    Frontier,
    Hierarchy,
    Item,
    ItemCorpus,
    Sample,
    WorkflowConfig,
    frontier_is_complete,
    validate_clustering,
    validate_hierarchy,
)

from conftest import build_hierarchy, random_hierarchy
from properties import (
    check_complete_frontiers_pairwise_consistent,
    check_leaves_form_complete_frontier,
)


SHAPE_TREE_SPEC = (
    "Universe",
    [
        (
            "Polygons",
            [
                ("Quadrilaterals", [("Rectangles", ["i2"]), ("Squares", ["i1", "i7"])]),
                ("Triangles", [("Equilateral", ["i3"]), ("Scalene", ["i4"])]),
            ],
        ),
        ("Round", [("Circles", ["i5", "i8"]), ("Ellipses", ["i6"])]),
    ],
)


def sample_of(items, iteration=1, kernel=()):
    return Sample(sample_id="s", items=set(items), kernel=set(kernel), iteration=iteration)


class TestValidateClustering:
    def test_exact_partition_ok(self):
        c = Clustering.from_lists("w", "s", [["a", "b"], ["c"]])
        assert validate_clustering(c, sample_of({"a", "b", "c"})).ok

    def test_overlap_flagged(self):
        c = Clustering.from_lists("w", "s", [["a", "b"], ["b", "c"]])
        report = validate_clustering(c, sample_of({"a", "b", "c"}))
        assert not report.ok
        assert any(v.code == "overlap" and v.item_ids == ["b"] for v in report.violations)

    def test_uncovered_item_flagged(self):
        c = Clustering.from_lists("w", "s", [["a"], ["b"]])
        report = validate_clustering(c, sample_of({"a", "b", "c"}))
        assert not report.ok
        assert any(v.code == "uncovered" and v.item_ids == ["c"] for v in report.violations)

    def test_extraneous_and_empty(self):
        c = Clustering.from_lists("w", "s", [["a", "z"], [], ["b", "c"]])
        report = validate_clustering(c, sample_of({"a", "b", "c"}))
        codes = {v.code for v in report.violations}
        assert "extraneous" in codes and "empty-cluster" in codes


class TestValidateHierarchy:
    def test_shape_tree_ok(self):
        assert validate_hierarchy(build_hierarchy(SHAPE_TREE_SPEC)).ok

    def test_children_sharing_an_item(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        # push i2 into Squares as well: children of Quadrilaterals now overlap
        squares = next(n for n in t.nodes.values() if n.label == "Squares")
        squares.items.add("i2")
        report = validate_hierarchy(t)
        assert any(v.code == "child-overlap" for v in report.violations)

    def test_itemless_concept(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        polygons = next(n for n in t.nodes.values() if n.label == "Polygons")
        hexagons = t.fresh_id()
        from quorum.model import ConceptNode

        t.nodes[hexagons] = ConceptNode(node_id=hexagons, label="Hexagons")
        polygons.children.append(hexagons)
        report = validate_hierarchy(t)
        assert any(v.code == "empty-concept" and v.node_id == hexagons for v in report.violations)

    def test_child_undercoverage(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        root = t.nodes[t.root]
        root.items.add("i9")  # instance of the root covered by no child
        report = validate_hierarchy(t)
        assert any(v.code == "child-undercoverage" and v.item_ids == ["i9"] for v in report.violations)

    def test_single_child_rejected(self):
        t = build_hierarchy(("Universe", [("Only", [("Fine", ["a"]), ("Other", ["b"])])]))
        # graft: make root have a single child
        assert any(v.code == "single-child" for v in validate_hierarchy(t).violations)


class TestFrontier:
    def test_all_leaves_complete(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        assert frontier_is_complete(t, Frontier.of(t.leaves()))

    def test_root_complete(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        assert frontier_is_complete(t, Frontier.of([t.root]))

    def test_mixed_granularity_complete(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        by_label = {n.label: n.node_id for n in t.nodes.values()}
        fr = Frontier.of([by_label["Polygons"], by_label["Circles"], by_label["Ellipses"]])
        assert frontier_is_complete(t, fr)

    def test_incomplete_frontier(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        by_label = {n.label: n.node_id for n in t.nodes.values()}
        assert not frontier_is_complete(t, Frontier.of([by_label["Polygons"]]))

    def test_non_antichain_rejected(self):
        t = build_hierarchy(SHAPE_TREE_SPEC)
        by_label = {n.label: n.node_id for n in t.nodes.values()}
        with pytest.raises(ValueError):
            frontier_is_complete(t, Frontier.of([by_label["Polygons"], by_label["Rectangles"]]))


class TestSampleAndConfig:
    def test_kernel_must_be_subset(self):
        with pytest.raises(ValueError):
            Sample(sample_id="s", items={"a"}, kernel={"b"}, iteration=2)

    def test_first_iteration_kernel_empty(self):
        with pytest.raises(ValueError):
            Sample(sample_id="s", items={"a"}, kernel={"a"}, iteration=1)

    def test_config_h_must_exceed_f(self):
        with pytest.raises(ValueError):
            WorkflowConfig(f=35, h=35).validate()

    def test_config_defaults_valid(self):
        WorkflowConfig().validate()


class TestSerialization:
    def test_round_trips(self):
        rng = Random(5)
        t = random_hierarchy(rng, [f"x{i}" for i in range(12)])
        assert Hierarchy.from_dict(t.to_dict()).to_dict() == t.to_dict()

        corpus = ItemCorpus.from_items(
            "c", [Item("a", {"u": 1}, {"p": "L"}), Item("b", "uri://b")]
        )
        assert ItemCorpus.from_dict(corpus.to_dict()).to_dict() == corpus.to_dict()

        c = Clustering.from_lists("w", "s", [["a", "b"], ["c"]])
        assert Clustering.from_dict(c.to_dict()).to_dict() == c.to_dict()

        s = Sample(sample_id="s", items={"a", "b"}, kernel={"a"}, iteration=3)
        assert Sample.from_dict(s.to_dict()).to_dict() == s.to_dict()

        cfg = WorkflowConfig(n=115, rng_seed=9)
        assert WorkflowConfig.from_dict(cfg.to_dict()) == cfg

        fr = Frontier.of(["n1", "n2"])
        assert Frontier.from_dict(fr.to_dict()) == fr

    def test_duplicate_item_ids_rejected(self):
        with pytest.raises(ValueError):
            ItemCorpus.from_items("c", [Item("a"), Item("a")])

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            ItemCorpus(name="c", items={})


def test_property_leaves_form_complete_frontier():
    check_leaves_form_complete_frontier(300)


def test_property_complete_frontiers_consistent():
    check_complete_frontiers_pairwise_consistent(300)
