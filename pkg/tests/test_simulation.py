from collections import Counter
from random import Random

import pytest

from quorum import consensus
from quorum.model import Sample, validate_clustering
from quorum.simulation import (
    ShapesSpec,
    WorkerModel,
    default_shapes_worker_model,
    flat_perspective,
    generate_flat_corpus,
    generate_shapes_corpus,
    simulate_categorization_vote,
    simulate_worker_clustering,
    worker_rng,
)


def shapes_corpus(count=25, seed=1):
    return generate_shapes_corpus(ShapesSpec(count=count), Random(seed))


def sample_over(corpus, k=None, seed=2):
    ids = sorted(corpus.ids())
    if k:
        ids = Random(seed).sample(ids, k)
    return Sample(sample_id="s", items=set(ids), kernel=set(), iteration=1)


class TestCorpusGeneration:
    def test_count_and_labels(self):
        corpus = shapes_corpus(25)
        assert len(corpus) == 25
        for item in corpus.items.values():
            assert set(item.ground_truth_labels) == {"shape", "color", "size"}

    def test_single_item_corpus(self):
        assert len(shapes_corpus(1)) == 1

    def test_deterministic_under_seed(self):
        a = generate_shapes_corpus(ShapesSpec(count=40), Random(9))
        b = generate_shapes_corpus(ShapesSpec(count=40), Random(9))
        assert a.to_dict() == b.to_dict()

    def test_flat_corpus(self):
        concepts = [f"c{i}" for i in range(5)]
        corpus = generate_flat_corpus(concepts, 50, Random(3))
        labels = {it.ground_truth_labels["category"] for it in corpus.items.values()}
        assert labels <= set(concepts)


class TestWorkerClustering:
    def test_zero_split_gives_top_frontier(self):
        corpus = shapes_corpus(60)
        model = default_shapes_worker_model(split_probability=0.0)
        model = WorkerModel(model.perspectives, [1.0, 0.0, 0.0], 0.0, 0.0)
        sample = sample_over(corpus)
        c = simulate_worker_clustering(model, sample, corpus, Random(5))
        blocks = {
            frozenset(
                i for i in sample.items
                if corpus.items[i].ground_truth_labels["shape"]
                in {"Rectangles", "Squares", "Equilateral", "Scalene"}
            ),
            frozenset(
                i for i in sample.items
                if corpus.items[i].ground_truth_labels["shape"] in {"Circles", "Ellipses"}
            ),
        }
        blocks = {b for b in blocks if b}
        assert set(c.clusters) == blocks

    def test_full_split_gives_leaf_partition(self):
        corpus = shapes_corpus(60)
        model = WorkerModel(ShapesSpec().perspectives(), [1.0, 0.0, 0.0], 1.0, 0.0)
        sample = sample_over(corpus)
        c = simulate_worker_clustering(model, sample, corpus, Random(6))
        for cluster in c.clusters:
            leaf_labels = {corpus.items[i].ground_truth_labels["shape"] for i in cluster}
            assert len(leaf_labels) == 1

    def test_always_a_valid_partition(self):
        corpus = shapes_corpus(80)
        model = default_shapes_worker_model()
        rng = Random(7)
        for k in range(300):
            sample = sample_over(corpus, k=rng.randint(2, 40), seed=k)
            c = simulate_worker_clustering(model, sample, corpus, rng, worker_id=f"w{k}")
            assert validate_clustering(c, sample).ok

    def test_same_perspective_clusterings_consistent(self):
        corpus = shapes_corpus(80)
        model = WorkerModel(ShapesSpec().perspectives(), [1.0, 0.0, 0.0], 0.5, 0.0)
        rng = Random(8)
        for k in range(300):
            sample = sample_over(corpus, k=rng.randint(2, 40), seed=1000 + k)
            a = simulate_worker_clustering(model, sample, corpus, rng, "a")
            b = simulate_worker_clustering(model, sample, corpus, rng, "b")
            assert consensus.are_consistent(a, b)

    def test_noisy_clustering_still_partitions(self):
        corpus = shapes_corpus(60)
        model = default_shapes_worker_model(noise_rate=0.3)
        rng = Random(11)
        for k in range(100):
            sample = sample_over(corpus, k=20, seed=k)
            c = simulate_worker_clustering(model, sample, corpus, rng, f"w{k}")
            assert validate_clustering(c, sample).ok

    def test_perspective_draws_follow_weights(self):
        corpus = shapes_corpus(120, seed=13)
        model = default_shapes_worker_model()  # 85 / 10 / 5
        sample = sample_over(corpus)
        shape_like = 0
        trials = 400
        rng = Random(14)
        for k in range(trials):
            c = simulate_worker_clustering(model, sample, corpus, rng, f"w{k}")
            # classify the drawn perspective by which ground truth makes every
            # cluster label-pure
            for name in ("shape", "color", "size"):
                if all(
                    len({corpus.items[i].ground_truth_labels[name] for i in cl}) == 1
                    or _within_one_concept(corpus, cl, name)
                    for cl in c.clusters
                ):
                    if name == "shape":
                        shape_like += 1
                    break
        assert shape_like / trials == pytest.approx(0.85, abs=0.06)


def _within_one_concept(corpus, cluster, perspective_name):
    from quorum.simulation import ShapesSpec

    spec = ShapesSpec()
    p = {x.name: x for x in spec.perspectives()}[perspective_name]
    labels = {corpus.items[i].ground_truth_labels[perspective_name] for i in cluster}
    return p.lowest_common_label(labels) is not None


class TestConsensusRecovery:
    def test_stylized_experiment_recovers_shape_hierarchy(self):
        """Twenty workers at the 85/10/5 mix on one sample: the maximum clique
        recovers the shape organization."""
        corpus = shapes_corpus(25, seed=21)
        model = default_shapes_worker_model()
        sample = sample_over(corpus)
        rng = Random(22)
        responses = [
            simulate_worker_clustering(model, sample, corpus, rng, f"w{k}") for k in range(20)
        ]
        g = consensus.build_clustering_graph(responses)
        clique = consensus.max_clique(g)
        t = consensus.construct_hierarchy(consensus.clique_members(g, clique))
        for leaf in t.leaves():
            labels = {corpus.items[i].ground_truth_labels["shape"] for i in t.nodes[leaf].items}
            assert _within_one_concept(corpus, t.nodes[leaf].items, "shape"), labels


class TestCategorizationVotes:
    def _pivots(self, corpus, concept_filter):
        groups = {}
        for item in corpus.items.values():
            label = concept_filter(item)
            if label:
                groups.setdefault(label, []).append(item.item_id)
        return {f"c-{k}": sorted(v)[:10] for k, v in sorted(groups.items())}

    def test_ancestor_concept_match(self):
        corpus = shapes_corpus(200, seed=31)
        model = default_shapes_worker_model()
        # pivot clusters at the coarse shape granularity
        coarse = {
            "Rectangles": "Polygons", "Squares": "Polygons", "Equilateral": "Polygons",
            "Scalene": "Polygons", "Circles": "Round", "Ellipses": "Round",
        }
        pivots = self._pivots(corpus, lambda it: coarse[it.ground_truth_labels["shape"]])
        triangle = next(
            it for it in corpus.items.values() if it.ground_truth_labels["shape"] == "Equilateral"
        )
        vote = simulate_categorization_vote(model, triangle, pivots, corpus, Random(32))
        assert vote == "c-Polygons"

    def test_single_cluster(self):
        corpus = shapes_corpus(30, seed=33)
        model = default_shapes_worker_model()
        item = next(iter(corpus.items.values()))
        vote = simulate_categorization_vote(model, item, {"only": ["item-00"]}, corpus, Random(34))
        assert vote == "only"

    def test_uniform_under_full_noise(self):
        corpus = shapes_corpus(100, seed=35)
        model = default_shapes_worker_model(noise_rate=1.0)
        pivots = self._pivots(corpus, lambda it: it.ground_truth_labels["shape"])
        item = next(iter(corpus.items.values()))
        rng = Random(36)
        counts = Counter(
            simulate_categorization_vote(model, item, pivots, corpus, rng) for _ in range(10_000)
        )
        k = len(pivots)
        expected = 10_000 / k
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        # chi-square with k-1=5 dof: 0.999 quantile ~ 20.5
        assert len(counts) == k
        assert chi2 < 20.5

    def test_abstains_when_no_cluster_relates(self):
        concepts = ["alpha", "beta", "gamma"]
        corpus = generate_flat_corpus(concepts, 60, Random(37))
        model = WorkerModel([flat_perspective(concepts)], [1.0], 0.5, 0.0)
        by_label = {}
        for it in corpus.items.values():
            by_label.setdefault(it.ground_truth_labels["category"], []).append(it.item_id)
        pivots = {"c-alpha": by_label["alpha"][:5], "c-beta": by_label["beta"][:5]}
        gamma_item = corpus.items[by_label["gamma"][0]]
        assert simulate_categorization_vote(model, gamma_item, pivots, corpus, Random(38)) is None


class TestTheoremDirection:
    def test_dominant_perspective_discovery_rate(self):
        """Frequency that the designated perspective shows up among m draws,
        against the 1-(1-1/k)^m bound: tight at equal weights, strict when the
        perspective actually dominates."""
        k, m, trials = 4, 10, 1000
        bound = 1.0 - (1.0 - 1.0 / k) ** m

        def frequency(weights, seed):
            rng = Random(seed)
            hits = 0
            for _ in range(trials):
                draws = rng.choices(range(k), weights=weights, k=m)
                hits += 0 in draws
            return hits / trials

        assert frequency([1.0 / k] * k, seed=40) >= bound - 0.02  # tight case
        assert frequency([0.55, 0.15, 0.15, 0.15], seed=41) >= bound  # dominant case

    def test_worker_rng_is_stable(self):
        assert worker_rng(7, "w1").random() == worker_rng(7, "w1").random()
        assert worker_rng(7, "w1").random() != worker_rng(7, "w2").random()
