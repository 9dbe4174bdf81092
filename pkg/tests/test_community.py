import random

import pytest

from bridgenet.community import Partition, PruneConfig, leiden, modularity, prune
from bridgenet.graph_core import Graph, connected_components

from util import gnp, modularity_oracle, set_partitions


def two_cliques(size=5, bridge=False):
    g = Graph()
    for base in ("a", "b"):
        names = [f"{base}{i}" for i in range(size)]
        for i in range(size):
            for j in range(i + 1, size):
                g.add_edge(names[i], names[j])
    if bridge:
        g.add_edge("a0", "b0")
    return g


def planted_partition(rng, sizes, p_in=0.9, p_out=0.05):
    g = Graph()
    blocks = []
    for b, size in enumerate(sizes):
        names = [f"b{b}_{i}" for i in range(size)]
        blocks.append(names)
        for name in names:
            g.add_node(name)
        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < p_in:
                    g.add_edge(names[i], names[j])
    for x in range(len(blocks)):
        for y in range(x + 1, len(blocks)):
            for u in blocks[x]:
                for v in blocks[y]:
                    if rng.random() < p_out:
                        g.add_edge(u, v)
    return g, blocks


def exhaustive_best_modularity(g):
    best_q = -float("inf")
    best = None
    for blocks in set_partitions(g.nodes()):
        membership = {}
        for cid, block in enumerate(blocks):
            for node in block:
                membership[node] = cid
        q = modularity_oracle(g, membership)
        if q > best_q:
            best_q, best = q, blocks
    return best_q, best


class TestModularity:
    def test_matches_definition_oracle(self):
        rng = random.Random(3)
        for _ in range(10):
            g = gnp(rng.randrange(3, 12), 0.4, rng)
            if g.m == 0:
                continue
            membership = {v: rng.randrange(3) for v in g.nodes()}
            assert modularity(g, membership) == pytest.approx(
                modularity_oracle(g, membership), abs=1e-12
            )

    def test_two_cliques_value(self):
        g = two_cliques()
        membership = {v: 0 if v.startswith("a") else 1 for v in g.nodes()}
        assert modularity(g, membership) == pytest.approx(0.5)


class TestLeiden:
    def test_two_disjoint_cliques_recovered_exactly(self):
        g = two_cliques()
        best_q, best_blocks = exhaustive_best_modularity(g)
        part = leiden(g, seed=1)
        assert part.modularity == pytest.approx(best_q, abs=1e-9)
        got = {frozenset(nodes) for nodes in part.clusters().values()}
        assert got == {frozenset(b) for b in best_blocks}

    def test_single_edge_one_cluster(self):
        g = Graph()
        g.add_edge("a", "b")
        merged_q = modularity_oracle(g, {"a": 0, "b": 0})
        split_q = modularity_oracle(g, {"a": 0, "b": 1})
        assert merged_q > split_q
        part = leiden(g, resolution=1.0, seed=0)
        assert part.membership["a"] == part.membership["b"]

    def test_edgeless_graph_singletons(self):
        g = Graph()
        for i in range(6):
            g.add_node(f"n{i}")
        part = leiden(g, seed=2)
        assert len(part.sizes) == 6
        assert all(size == 1 for size in part.sizes.values())

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError):
            leiden(Graph())

    def test_deterministic_for_fixed_seed(self):
        rng = random.Random(5)
        g = gnp(40, 0.15, rng)
        assert leiden(g, seed=11).membership == leiden(g, seed=11).membership

    def test_clusters_connected_on_random_graphs(self):
        rng = random.Random(9)
        for trial in range(25):
            g = gnp(rng.randrange(5, 45), rng.uniform(0.05, 0.35), rng)
            part = leiden(g, seed=trial)
            for nodes in part.clusters().values():
                sub = g.subgraph(nodes)
                assert connected_components(sub).component_count == 1, f"trial {trial}"

    def test_quality_beats_singletons_and_random(self):
        rng = random.Random(13)
        for trial in range(15):
            g = gnp(rng.randrange(6, 40), rng.uniform(0.08, 0.3), rng)
            part = leiden(g, seed=trial)
            singleton_q = modularity(g, {v: i for i, v in enumerate(g.nodes())})
            assert part.modularity >= singleton_q - 1e-12
            k = len(part.sizes)
            for rep in range(3):
                shuffled = {v: rng.randrange(k) for v in g.nodes()}
                assert part.modularity >= modularity(g, shuffled) - 1e-9

    def test_planted_split_recovered(self):
        rng = random.Random(21)
        g, blocks = planted_partition(rng, [8, 8], p_in=0.95, p_out=0.02)
        part = leiden(g, seed=4)
        got = {frozenset(nodes) for nodes in part.clusters().values()}
        assert got == {frozenset(b) for b in blocks}

    def test_modularity_reported_matches_membership(self):
        rng = random.Random(31)
        g = gnp(30, 0.2, rng)
        part = leiden(g, seed=3)
        assert part.modularity == pytest.approx(
            modularity_oracle(g, part.membership), abs=1e-12
        )


class TestPrune:
    def _partition(self, g, sizes):
        membership = {}
        cid = 0
        nodes = iter(g.nodes())
        size_map = {}
        for size in sizes:
            for _ in range(size):
                membership[next(nodes)] = cid
            size_map[cid] = size
            cid += 1
        return Partition(
            membership=membership, sizes=size_map, modularity=0.0, resolution=1.0
        )

    def test_strict_boundary_more_than_ten(self):
        g = Graph()
        for i in range(25):
            g.add_node(f"n{i}")
        part = self._partition(g, [12, 10, 3])
        pruned = prune(g, part)
        assert pruned.n == 12
        assert {part.membership[v] for v in pruned.nodes()} == {0}

    def test_all_elevens_unchanged_with_stamp(self):
        g = Graph()
        for i in range(22):
            g.add_node(f"n{i}")
        part = self._partition(g, [11, 11])
        pruned = prune(g, part)
        assert pruned.n == 22
        assert all("cluster_id" in pruned.attrs(v) for v in pruned.nodes())

    def test_monotone_in_min_size(self):
        rng = random.Random(2)
        g = gnp(40, 0.12, rng)
        part = leiden(g, seed=1)
        previous = None
        for min_size in range(1, 12):
            kept = set(prune(g, part, PruneConfig(min_size)).nodes())
            if previous is not None:
                assert kept <= previous
            previous = kept

    def test_partition_must_cover_graph(self):
        g = Graph()
        g.add_node("a")
        g.add_node("b")
        part = Partition(membership={"a": 0}, sizes={0: 1}, modularity=0.0, resolution=1.0)
        with pytest.raises(ValueError):
            prune(g, part)

    def test_invalid_min_size(self):
        with pytest.raises(ValueError):
            PruneConfig(0)
