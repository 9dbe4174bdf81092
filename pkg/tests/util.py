"""Shared test helpers: independent oracles and graph/corpus generators.

Every oracle here re-derives its answer from first principles (plain BFS
over an adjacency dict, definition-level counting) so library results are
checked against a second, unrelated computation path.
"""

from __future__ import annotations

import json
import random
from collections import deque
from pathlib import Path

from bridgenet.graph_core import Graph


def adjacency(g: Graph) -> dict[str, set[str]]:
    return {v: set(g.neighbors(v)) for v in g.nodes()}


def brute_component_count(adj: dict[str, set[str]], skip: str | None = None) -> int:
    seen: set[str] = set()
    count = 0
    for start in adj:
        if start == skip or start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v != skip and v not in seen:
                    seen.add(v)
                    stack.append(v)
    return count


def brute_articulation_points(g: Graph) -> set[str]:
    """Definition-level: nodes whose masked removal raises the component count."""
    adj = adjacency(g)
    base = brute_component_count(adj)
    return {v for v in adj if brute_component_count(adj, skip=v) > base}


def brute_bridge_edges(g: Graph) -> set[tuple[str, str]]:
    """Edges whose removal raises the component count."""
    adj = adjacency(g)
    base = brute_component_count(adj)
    index = g.node_index()
    bridges = set()
    for u, v, _w in g.edges():
        adj[u].discard(v)
        adj[v].discard(u)
        if brute_component_count(adj) > base:
            bridges.add((u, v) if index[u] < index[v] else (v, u))
        adj[u].add(v)
        adj[v].add(u)
    return bridges


def brute_distance(adj: dict[str, set[str]], s: str, t: str) -> int | None:
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                if v == t:
                    return dist[v]
                queue.append(v)
    return None


def betweenness_oracle(g: Graph) -> dict[str, float]:
    """Pair-counting betweenness straight from the definition.

    sigma_st(v) = sigma_sv * sigma_vt when d(s,v) + d(v,t) = d(s,t); the score
    sums sigma_st(v) / sigma_st over unordered pairs, normalized by the pair
    count. Independent of the dependency-accumulation implementation.
    """
    nodes = g.nodes()
    n = len(nodes)
    scores = {v: 0.0 for v in nodes}
    if n < 3:
        return scores
    adj = adjacency(g)
    dist: dict[str, dict[str, int]] = {}
    sigma: dict[str, dict[str, int]] = {}
    for s in nodes:
        d = {s: 0}
        sg = {v: 0 for v in nodes}
        sg[s] = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in d:
                    d[v] = d[u] + 1
                    queue.append(v)
                if d[v] == d[u] + 1:
                    sg[v] += sg[u]
        dist[s] = d
        sigma[s] = sg
    for i, s in enumerate(nodes):
        for t in nodes[i + 1 :]:
            if t not in dist[s] or sigma[s][t] == 0:
                continue
            d_st = dist[s][t]
            for v in nodes:
                if v == s or v == t:
                    continue
                if v in dist[s] and v in dist[t] and dist[s][v] + dist[t][v] == d_st:
                    scores[v] += sigma[s][v] * sigma[t][v] / sigma[s][t]
    pairs = (n - 1) * (n - 2) / 2
    return {v: val / pairs for v, val in scores.items()}


def modularity_oracle(g: Graph, membership: dict[str, int], resolution: float = 1.0) -> float:
    """Definition-level modularity over ordered node pairs."""
    nodes = g.nodes()
    two_w = sum(g.weighted_degree(v) for v in nodes)
    if two_w == 0:
        return 0.0
    q = 0.0
    for u in nodes:
        for v in nodes:
            if membership[u] != membership[v]:
                continue
            a_uv = g.weight(u, v) if g.has_edge(u, v) else 0.0
            q += a_uv - resolution * g.weighted_degree(u) * g.weighted_degree(v) / two_w
    return q / two_w


def set_partitions(items: list[str]):
    """All set partitions of `items` (restricted growth strings)."""
    n = len(items)
    if n == 0:
        yield []
        return
    codes = [0] * n

    def rec(i: int, maxc: int):
        if i == n:
            blocks: dict[int, list[str]] = {}
            for item, c in zip(items, codes):
                blocks.setdefault(c, []).append(item)
            yield [blocks[c] for c in sorted(blocks)]
            return
        for c in range(maxc + 2):
            codes[i] = c
            yield from rec(i + 1, max(maxc, c))

    yield from rec(1, 0)


def gnp(n: int, p: float, rng: random.Random, prefix: str = "n") -> Graph:
    g = Graph()
    for i in range(n):
        g.add_node(f"{prefix}{i}")
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(f"{prefix}{i}", f"{prefix}{j}")
    return g


def community_chain(
    n_communities: int, size: int, p_in: float, rng: random.Random
) -> Graph:
    """Dense communities joined in a chain through single cut vertices.

    Each junction node belongs to one community and is the only link to the
    next, so removing it disconnects the graph.
    """
    g = Graph()
    members: list[list[str]] = []
    for c in range(n_communities):
        nodes = [f"c{c}_{i}" for i in range(size)]
        members.append(nodes)
        for node in nodes:
            g.add_node(node)
        # path backbone keeps each community connected; extras densify it
        for i in range(1, size):
            g.add_edge(nodes[i - 1], nodes[i])
        for i in range(size):
            for j in range(i + 2, size):
                if rng.random() < p_in:
                    g.add_edge(nodes[i], nodes[j])
    for c in range(n_communities - 1):
        g.add_edge(members[c][size // 2], members[c + 1][0])
    return g


# -- end-to-end fixture dataset -------------------------------------------------


def write_fixture_posts(path: Path) -> int:
    """A 20-post dataset small enough for CI: two dense narrative groups,
    two mixed posts, one empty post, one post of pure social-media artifacts."""
    t1 = "Hurricane relief supplies arriving Tampa shelters volunteers needed urgently"
    t2 = "Storm surge flooding coastal evacuation routes highway closures emergency"
    mix = "Hurricane relief supplies flooding coastal evacuation shelters emergency"
    platforms_a = ["X", "X", "X", "YouTube", "Reddit", "X", "X", "YouTube"]
    platforms_b = ["X", "YouTube", "X", "Reddit", "X", "X", "YouTube", "X"]
    rows = []

    def post(i, platform, user, text, event):
        return {
            "platform": platform,
            "post_id": f"p{i}",
            "user_id": user,
            "username": f"{user}_name",
            "text": text,
            "event": event,
        }

    i = 0
    for k in range(8):
        rows.append(post(i, platforms_a[k], f"u{k % 5}", f"{t1} detail{k // 3}", "helene"))
        i += 1
    for k in range(8):
        rows.append(post(i, platforms_b[k], f"v{k % 5}", f"{t2} note{k // 3}", "milton"))
        i += 1
    rows.append(post(i, "X", "w0", mix, "helene"))
    i += 1
    rows.append(post(i, "Reddit", "w1", mix + " update", "milton"))
    i += 1
    rows.append(post(i, "X", "w2", "", "other"))
    i += 1
    rows.append(post(i, "YouTube", "w3", "RT @someone: check https://t.co/xyz #only", "other"))
    i += 1
    with path.open("w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r) + "\n")
    return len(rows)
