"""Consensus over worker clusterings of one sample: pairwise consistency, the
clustering graph, exact maximum-multiplicity clique search, and construction of
the hierarchy induced by a consistent clique.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import ROOT_LABEL, Clustering, ConceptNode, Hierarchy


class InconsistentClusteringsError(ValueError):
    pass


def are_consistent(a: Clustering, b: Clustering) -> bool:
    """Two clusterings of the same item set are consistent iff every cross pair
    of clusters is disjoint, nested, or equal (no proper overlap)."""
    if a.item_ids() != b.item_ids():
        raise ValueError("consistency is only defined for clusterings of the same item set")
    for ca in a.clusters:
        for cb in b.clusters:
            inter = ca & cb
            if inter and inter != ca and inter != cb:
                return False
    return True


@dataclass
class Vertex:
    clustering: Clustering
    multiplicity: int
    worker_ids: list[str] = field(default_factory=list)


@dataclass
class ClusteringGraph:
    """Deduplicated worker clusterings with consistency edges. Identical
    partitions collapse into one vertex carrying their multiplicity."""

    vertices: list[Vertex]
    edges: set[tuple[int, int]]  # (i, j) with i < j

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_text(self) -> str:
        """Plain-text debug export: one vertex line per clustering (with
        multiplicity and the partition), then one line per consistency edge."""
        lines = [f"vertices {len(self.vertices)}"]
        for i, v in enumerate(self.vertices):
            part = " | ".join(
                ",".join(sorted(c)) for c in sorted(v.clustering.clusters, key=lambda c: (len(c), sorted(c)))
            )
            lines.append(f"v {i} multiplicity={v.multiplicity} workers={','.join(v.worker_ids)} clusters: {part}")
        lines.append(f"edges {len(self.edges)}")
        for i, j in sorted(self.edges):
            lines.append(f"e {i} {j}")
        return "\n".join(lines) + "\n"


def build_clustering_graph(clusterings: list[Clustering]) -> ClusteringGraph:
    if not clusterings:
        raise ValueError("need at least one clustering")
    vertices: list[Vertex] = []
    index: dict[frozenset[frozenset[str]], int] = {}
    for c in clusterings:
        key = c.partition_key()
        if key in index:
            v = vertices[index[key]]
            v.multiplicity += 1
            v.worker_ids.append(c.worker_id)
        else:
            index[key] = len(vertices)
            vertices.append(Vertex(clustering=c, multiplicity=1, worker_ids=[c.worker_id]))
    edges: set[tuple[int, int]] = set()
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if are_consistent(vertices[i].clustering, vertices[j].clustering):
                edges.add((i, j))
    return ClusteringGraph(vertices=vertices, edges=edges)


def _maximal_cliques(adj: list[set[int]]) -> list[frozenset[int]]:
    """All maximal cliques, Bron-Kerbosch with pivoting. Graphs here have at
    most a few dozen vertices (one per distinct worker response)."""
    cliques: list[frozenset[int]] = []

    def expand(clique: set[int], candidates: set[int], excluded: set[int]) -> None:
        if not candidates and not excluded:
            cliques.append(frozenset(clique))
            return
        pivot = max(candidates | excluded, key=lambda v: len(adj[v] & candidates))
        for v in sorted(candidates - adj[pivot]):
            expand(clique | {v}, candidates & adj[v], excluded & adj[v])
            candidates.remove(v)
            excluded.add(v)

    expand(set(), set(range(len(adj))), set())
    return cliques


def max_clique(g: ClusteringGraph) -> set[int]:
    """Exact maximum clique by total vertex multiplicity (workers vote, not
    distinct responses). Ties prefer the clique whose induced hierarchy carries
    more distinct clusters, then the lexicographically smallest index sequence."""
    if not g.vertices:
        raise ValueError("empty graph")
    adj = g.adjacency()

    def weight(c: frozenset[int]) -> int:
        return sum(g.vertices[i].multiplicity for i in c)

    def cluster_count(c: frozenset[int]) -> int:
        unique: set[frozenset[str]] = set()
        for i in c:
            unique.update(g.vertices[i].clustering.clusters)
        return len(unique)

    # A maximum-weight clique is always maximal (multiplicities are positive),
    # so restricting to maximal cliques is exact.
    cliques = _maximal_cliques(adj)
    top = max(weight(c) for c in cliques)
    pool = [c for c in cliques if weight(c) == top]
    if len(pool) > 1:
        finest = max(cluster_count(c) for c in pool)
        pool = [c for c in pool if cluster_count(c) == finest]
    return set(min(pool, key=lambda c: sorted(c)))


def clique_members(g: ClusteringGraph, clique: set[int]) -> list[Clustering]:
    """Distinct clusterings of the clique, in vertex order."""
    return [g.vertices[i].clustering for i in sorted(clique)]


@dataclass
class CliqueResult:
    """Winning clique plus the hierarchy its clusters induce."""

    member_vertex_indices: set[int]
    total_multiplicity: int
    hierarchy: Hierarchy


def resolve_consensus(g: ClusteringGraph) -> CliqueResult:
    """One-shot consensus for a sample: find the maximum-multiplicity clique
    and construct its hierarchy."""
    clique = max_clique(g)
    return CliqueResult(
        member_vertex_indices=clique,
        total_multiplicity=sum(g.vertices[i].multiplicity for i in clique),
        hierarchy=construct_hierarchy(clique_members(g, clique)),
    )


def construct_hierarchy(clique_clusterings: list[Clustering]) -> Hierarchy:
    """Organize the unique clusters of pairwise-consistent clusterings into a
    hierarchy: each cluster's parent is the unique smallest strict superset
    among the clusters plus the Universe (the whole sample)."""
    if not clique_clusterings:
        raise ValueError("need at least one clustering")
    for i in range(len(clique_clusterings)):
        for j in range(i + 1, len(clique_clusterings)):
            if not are_consistent(clique_clusterings[i], clique_clusterings[j]):
                raise InconsistentClusteringsError(
                    f"clusterings {i} and {j} are not consistent; a clique is required"
                )

    universe: frozenset[str] = frozenset(clique_clusterings[0].item_ids())
    unique: set[frozenset[str]] = set()
    for c in clique_clusterings:
        unique.update(c.clusters)
    unique.discard(universe)

    # Deterministic ids: big clusters first so parents get smaller ids.
    ordered = sorted(unique, key=lambda c: (-len(c), sorted(c)))
    t = Hierarchy(root="n0", nodes={})
    t.nodes["n0"] = ConceptNode(node_id="n0", label=ROOT_LABEL, items=set(universe))
    t.next_id = 1
    id_of: dict[frozenset[str], str] = {universe: "n0"}
    for cluster in ordered:
        nid = t.fresh_id()
        id_of[cluster] = nid
        t.nodes[nid] = ConceptNode(node_id=nid, items=set(cluster))

    for cluster in ordered:
        supersets = [other for other in unique if cluster < other]
        if supersets:
            smallest = min(len(s) for s in supersets)
            candidates = [s for s in supersets if len(s) == smallest]
            if len(candidates) > 1:
                raise InconsistentClusteringsError("smallest strict superset is not unique")
            parent = id_of[candidates[0]]
        else:
            parent = t.root
        t.nodes[parent].children.append(id_of[cluster])

    for node in t.nodes.values():
        node.children.sort(key=lambda nid: (-len(t.nodes[nid].items), sorted(t.nodes[nid].items)))
    return t


def discovery_probability(k: int, m: int) -> float:
    """Lower bound on the chance that m worker responses reveal the most likely
    of k latent hierarchies: 1 - (1 - 1/k)^m."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    return 1.0 - (1.0 - 1.0 / k) ** m


def clustering_in_multiple_maximal_cliques(g: ClusteringGraph) -> bool:
    """True when some vertex lies in more than one maximal clique, in which case
    the discovery-probability bound's premise does not hold."""
    seen: dict[int, int] = {}
    for clique in _maximal_cliques(g.adjacency()):
        for v in clique:
            seen[v] = seen.get(v, 0) + 1
    return any(count > 1 for count in seen.values())
