"""Leiden community detection and cluster-size pruning.

Full Leiden (queue-based local moving, refinement, aggregation) on weighted
undirected graphs, maximizing modularity at a resolution parameter. All
randomness flows from one seeded generator, tie-breaks prefer the lowest
cluster id, so a fixed seed gives a fixed partition. Output clusters always
induce connected subgraphs.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .graph_core import Graph, connected_components

_EPS = 1e-12


@dataclass
class Partition:
    membership: dict[str, int]
    sizes: dict[int, int]
    modularity: float
    resolution: float
    seed: int = 0

    def clusters(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, cid in self.membership.items():
            out.setdefault(cid, []).append(node)
        return out


@dataclass
class PruneConfig:
    # "more than 10 nodes" retained, i.e. size >= 11
    min_cluster_size: int = 11

    def __post_init__(self) -> None:
        if self.min_cluster_size < 1:
            raise ValueError("min_cluster_size must be >= 1")


def modularity(g: Graph, membership: dict[str, int], resolution: float = 1.0) -> float:
    """Weighted modularity at the given resolution; 0.0 for edgeless graphs."""
    total = g.total_weight()
    if total == 0.0:
        return 0.0
    internal: dict[int, float] = {}
    degsum: dict[int, float] = {}
    for u, v, w in g.edges():
        if membership[u] == membership[v]:
            c = membership[u]
            internal[c] = internal.get(c, 0.0) + w
    for node in g.nodes():
        c = membership[node]
        degsum[c] = degsum.get(c, 0.0) + g.weighted_degree(node)
    q = 0.0
    for c, d in degsum.items():
        q += internal.get(c, 0.0) / total - resolution * (d / (2.0 * total)) ** 2
    return q


def leiden(g: Graph, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Cluster `g`, maximizing modularity at `resolution`.

    Deterministic for a fixed seed. Every returned cluster induces a
    connected subgraph; any community the move phase leaves disconnected is
    split into its components at the end (which never lowers modularity).
    """
    nodes = g.nodes()
    if not nodes:
        raise ValueError("cannot cluster an empty graph")
    index = {v: i for i, v in enumerate(nodes)}
    adj: list[dict[int, float]] = [dict() for _ in nodes]
    for u, v, w in g.edges():
        adj[index[u]][index[v]] = w
        adj[index[v]][index[u]] = w
    loops = [0.0] * len(nodes)
    rng = random.Random(seed)

    membership = _leiden_engine(adj, loops, rng, resolution)

    final = {v: membership[index[v]] for v in nodes}
    final = _split_disconnected(g, final)
    final = _canonical_ids(g, final)
    sizes: dict[int, int] = {}
    for cid in final.values():
        sizes[cid] = sizes.get(cid, 0) + 1
    return Partition(
        membership=final,
        sizes=sizes,
        modularity=modularity(g, final, resolution),
        resolution=resolution,
        seed=seed,
    )


def prune(g: Graph, p: Partition, cfg: PruneConfig | None = None) -> Graph:
    """Induced subgraph of nodes in large-enough clusters, cluster ids stamped."""
    cfg = cfg or PruneConfig()
    missing = [v for v in g.nodes() if v not in p.membership]
    if missing:
        raise ValueError(f"partition does not cover {len(missing)} nodes")
    keep = [
        v for v in g.nodes() if p.sizes[p.membership[v]] >= cfg.min_cluster_size
    ]
    sub = g.subgraph(keep)
    for v in sub.nodes():
        sub.add_node(v, cluster_id=p.membership[v])
    return sub


# -- engine -------------------------------------------------------------------
# The engine works on dense integer node ids. Aggregated graphs carry
# self-loop weights; a node's weighted degree counts its self-loop twice.


def _leiden_engine(
    adj: list[dict[int, float]],
    loops: list[float],
    rng: random.Random,
    resolution: float,
) -> list[int]:
    n_orig = len(adj)
    node_map = list(range(n_orig))  # original node -> current-level node
    membership = list(range(n_orig))
    for _level in range(64):
        k = [sum(a.values()) + 2.0 * lo for a, lo in zip(adj, loops)]
        two_w = sum(k)
        if two_w == 0.0:
            break
        _local_move(adj, k, two_w, membership, rng, resolution)
        if len(set(membership)) == len(adj):
            break
        refined = _refine(adj, k, two_w, membership, rng, resolution)
        refined_ids, n_refined = _compress(refined)
        if n_refined == len(adj):
            break
        adj, loops = _aggregate(adj, loops, refined_ids, n_refined)
        new_membership = [0] * n_refined
        for v, r in enumerate(refined_ids):
            new_membership[r] = membership[v]
        membership = new_membership
        node_map = [refined_ids[cur] for cur in node_map]
    return [membership[cur] for cur in node_map]


def _local_move(
    adj: list[dict[int, float]],
    k: list[float],
    two_w: float,
    membership: list[int],
    rng: random.Random,
    resolution: float,
) -> bool:
    comm_deg: dict[int, float] = {}
    for v, c in enumerate(membership):
        comm_deg[c] = comm_deg.get(c, 0.0) + k[v]
    order = list(range(len(adj)))
    rng.shuffle(order)
    queue = deque(order)
    queued = [True] * len(adj)
    next_comm = max(membership) + 1
    moved_any = False
    while queue:
        v = queue.popleft()
        queued[v] = False
        a = membership[v]
        kv = k[v]
        link: dict[int, float] = {}
        for u, w in adj[v].items():
            c = membership[u]
            link[c] = link.get(c, 0.0) + w
        stay = link.get(a, 0.0) - resolution * kv * (comm_deg[a] - kv) / two_w
        best_c, best_g = a, stay
        for c in sorted(link):
            if c == a:
                continue
            gain = link[c] - resolution * kv * comm_deg[c] / two_w
            if gain > best_g + _EPS or (abs(gain - best_g) <= _EPS and c < best_c):
                best_c, best_g = c, gain
        if best_g < -_EPS:
            # isolating v into a fresh community has gain 0
            best_c, best_g = next_comm, 0.0
        if best_c != a and best_g > stay + _EPS:
            membership[v] = best_c
            comm_deg[a] -= kv
            comm_deg[best_c] = comm_deg.get(best_c, 0.0) + kv
            if best_c == next_comm:
                next_comm += 1
            moved_any = True
            for u in adj[v]:
                if membership[u] != best_c and not queued[u]:
                    queue.append(u)
                    queued[u] = True
    return moved_any


def _refine(
    adj: list[dict[int, float]],
    k: list[float],
    two_w: float,
    membership: list[int],
    rng: random.Random,
    resolution: float,
) -> list[int]:
    """Re-partition each community from singletons by connected greedy merges.

    Only singleton nodes merge, and only into refined communities they share
    an edge with inside their own community, so every refined community is
    connected. Zero-gain merges are allowed (they enable aggregation).
    """
    n = len(adj)
    refined = list(range(n))
    ref_deg = list(k)
    ref_size = [1] * n
    order = list(range(n))
    rng.shuffle(order)
    for v in order:
        a = refined[v]
        if ref_size[a] > 1:
            continue
        kv = k[v]
        link: dict[int, float] = {}
        for u, w in adj[v].items():
            if membership[u] != membership[v]:
                continue
            r = refined[u]
            if r != a:
                link[r] = link.get(r, 0.0) + w
        if not link:
            continue
        best_r = None
        best_g = -float("inf")
        for r in sorted(link):
            gain = link[r] - resolution * kv * ref_deg[r] / two_w
            if gain > best_g + _EPS:
                best_r, best_g = r, gain
        if best_r is not None and best_g >= -_EPS:
            ref_size[a] -= 1
            ref_size[best_r] += 1
            ref_deg[a] -= kv
            ref_deg[best_r] += kv
            refined[v] = best_r
    return refined


def _compress(ids: list[int]) -> tuple[list[int], int]:
    remap: dict[int, int] = {}
    out = []
    for i in ids:
        if i not in remap:
            remap[i] = len(remap)
        out.append(remap[i])
    return out, len(remap)


def _aggregate(
    adj: list[dict[int, float]],
    loops: list[float],
    refined_ids: list[int],
    n_refined: int,
) -> tuple[list[dict[int, float]], list[float]]:
    new_adj: list[dict[int, float]] = [dict() for _ in range(n_refined)]
    new_loops = [0.0] * n_refined
    for v, r in enumerate(refined_ids):
        new_loops[r] += loops[v]
        for u, w in adj[v].items():
            s = refined_ids[u]
            if s == r:
                if u > v:
                    new_loops[r] += w
            else:
                new_adj[r][s] = new_adj[r].get(s, 0.0) + w
    return new_adj, new_loops


def _split_disconnected(g: Graph, membership: dict[str, int]) -> dict[str, int]:
    """Split any disconnected community into its connected parts.

    Splitting a disconnected community always raises modularity (resolution
    > 0), so this safeguard is monotone in quality.
    """
    clusters: dict[int, list[str]] = {}
    for node, cid in membership.items():
        clusters.setdefault(cid, []).append(node)
    out: dict[str, int] = {}
    next_id = 0
    for cid in sorted(clusters):
        sub = g.subgraph(clusters[cid])
        labeling = connected_components(sub)
        for node in sub.nodes():
            out[node] = next_id + labeling.labels[node]
        next_id += labeling.component_count
    return out


def _canonical_ids(g: Graph, membership: dict[str, int]) -> dict[str, int]:
    """Relabel cluster ids in order of each cluster's smallest node index."""
    remap: dict[int, int] = {}
    for node in g.nodes():
        cid = membership[node]
        if cid not in remap:
            remap[cid] = len(remap)
    return {node: remap[membership[node]] for node in membership}
