"""Undirected weighted graph with node attributes and exact cut-structure queries.

The removal test (`remove_node_delta`) and the linear-time articulation-point
detector are the ground truth that the heuristic bridge pipeline is verified
against.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional


class GraphError(Exception):
    """Structural violation or unknown-node access."""


class Graph:
    """Simple undirected weighted graph keyed by string node ids.

    Nodes keep insertion order; that order defines the dense integer index
    used by centrality kernels and canonical component labeling. Self-loops
    are rejected at insertion.
    """

    def __init__(self) -> None:
        self._adj: dict[str, dict[str, float]] = {}
        self._attrs: dict[str, dict] = {}

    # -- construction -------------------------------------------------------

    def add_node(self, node: str, **attrs) -> None:
        if node not in self._adj:
            self._adj[node] = {}
            self._attrs[node] = {}
        if attrs:
            self._attrs[node].update(attrs)

    def add_edge(self, u: str, v: str, weight: float = 1.0) -> None:
        if u == v:
            raise GraphError(f"self-loop rejected: {u!r}")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = weight
        self._adj[v][u] = weight

    def copy(self) -> "Graph":
        g = Graph()
        for node, attrs in self._attrs.items():
            g.add_node(node, **attrs)
        for u, v, w in self.edges():
            g.add_edge(u, v, w)
        return g

    def subgraph(self, nodes: Iterable[str]) -> "Graph":
        """Induced subgraph; keeps attribute dicts and relative node order."""
        keep = set(nodes)
        for node in keep:
            if node not in self._adj:
                raise GraphError(f"unknown node: {node!r}")
        g = Graph()
        for node in self._adj:
            if node in keep:
                g.add_node(node, **self._attrs[node])
        for u, v, w in self.edges():
            if u in keep and v in keep:
                g.add_edge(u, v, w)
        return g

    # -- queries ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def nodes(self) -> list[str]:
        return list(self._adj)

    def has_node(self, node: str) -> bool:
        return node in self._adj

    def has_edge(self, u: str, v: str) -> bool:
        return u in self._adj and v in self._adj[u]

    def neighbors(self, node: str) -> list[str]:
        self._require(node)
        return list(self._adj[node])

    def degree(self, node: str) -> int:
        self._require(node)
        return len(self._adj[node])

    def weight(self, u: str, v: str) -> float:
        if not self.has_edge(u, v):
            raise GraphError(f"no edge {u!r}-{v!r}")
        return self._adj[u][v]

    def weighted_degree(self, node: str) -> float:
        self._require(node)
        return sum(self._adj[node].values())

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges())

    def attrs(self, node: str) -> dict:
        self._require(node)
        return self._attrs[node]

    def node_index(self) -> dict[str, int]:
        """Stable node -> dense integer index map (insertion order)."""
        return {node: i for i, node in enumerate(self._adj)}

    def edges(self) -> Iterator[tuple[str, str, float]]:
        """Each undirected edge once, ordered by (index(u), index(v))."""
        index = self.node_index()
        for u in self._adj:
            for v, w in self._adj[u].items():
                if index[u] < index[v]:
                    yield u, v, w

    def _require(self, node: str) -> None:
        if node not in self._adj:
            raise GraphError(f"unknown node: {node!r}")


@dataclass
class ComponentLabeling:
    """Canonical connected-component labeling.

    Component ids are assigned in order of each component's smallest node
    index, so the labeling is independent of traversal details.
    """

    labels: dict[str, int]
    component_count: int

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, cid in self.labels.items():
            out.setdefault(cid, []).append(node)
        return out


def connected_components(g: Graph, skip: Optional[str] = None) -> ComponentLabeling:
    """BFS labeling; `skip` masks one node (used by the removal test)."""
    labels: dict[str, int] = {}
    next_id = 0
    for start in g.nodes():
        if start == skip or start in labels:
            continue
        labels[start] = next_id
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if v != skip and v not in labels:
                    labels[v] = next_id
                    queue.append(v)
        next_id += 1
    return ComponentLabeling(labels=labels, component_count=next_id)


def shortest_path_len(
    g: Graph, s: str, t: str, skip: Optional[str] = None
) -> Optional[int]:
    """Unweighted hop distance; None when t is unreachable from s."""
    g._require(s)
    g._require(t)
    if s == skip or t == skip:
        raise GraphError("endpoint coincides with masked node")
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v == skip or v in dist:
                continue
            dist[v] = dist[u] + 1
            if v == t:
                return dist[v]
            queue.append(v)
    return None


def articulation_points(g: Graph) -> set[str]:
    """Nodes whose removal increases the component count (DFS low-link)."""
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    result: set[str] = set()
    counter = 0

    for root in g.nodes():
        if root in disc:
            continue
        # Iterative Hopcroft-Tarjan; recursion would overflow on long paths.
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack: list[tuple[str, Optional[str], Iterator[str]]] = [
            (root, None, iter(g.neighbors(root)))
        ]
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for nbr in it:
                if nbr not in disc:
                    disc[nbr] = low[nbr] = counter
                    counter += 1
                    if node == root:
                        root_children += 1
                    stack.append((nbr, node, iter(g.neighbors(nbr))))
                    advanced = True
                    break
                elif nbr != parent:
                    low[node] = min(low[node], disc[nbr])
            if advanced:
                continue
            stack.pop()
            if stack:
                pnode = stack[-1][0]
                low[pnode] = min(low[pnode], low[node])
                if pnode != root and low[node] >= disc[pnode]:
                    result.add(pnode)
        if root_children >= 2:
            result.add(root)
    return result


@dataclass
class PairDelta:
    """Hop distance between two former neighbors before and after removal."""

    u: str
    w: str
    before: Optional[int]
    after: Optional[int]  # None = unreachable


@dataclass
class RemovalImpact:
    node: str
    component_delta: int
    pair_deltas: list[PairDelta] = field(default_factory=list)

    @property
    def disconnected_pairs(self) -> int:
        return sum(1 for p in self.pair_deltas if p.after is None)


def remove_node_delta(g: Graph, v: str) -> RemovalImpact:
    """Effect of deleting v with its incident edges.

    Reports the component-count change and, for every unordered pair of v's
    neighbors, the hop distance before vs. after removal. The graph itself is
    never mutated; removal is simulated with a masked traversal.
    """
    g._require(v)
    before_count = connected_components(g).component_count
    after_count = connected_components(g, skip=v).component_count
    index = g.node_index()
    nbrs = sorted(g.neighbors(v), key=index.__getitem__)
    pairs = []
    for i in range(len(nbrs)):
        for j in range(i + 1, len(nbrs)):
            u, w = nbrs[i], nbrs[j]
            pairs.append(
                PairDelta(
                    u=u,
                    w=w,
                    before=shortest_path_len(g, u, w),
                    after=shortest_path_len(g, u, w, skip=v),
                )
            )
    return RemovalImpact(
        node=v, component_delta=after_count - before_count, pair_deltas=pairs
    )


# -- file format -------------------------------------------------------------
#
# Edge list: one edge per line, "u<TAB>v<TAB>weight". Node attributes live in
# a JSON Lines sidecar (<path>.nodes.jsonl) holding every node in order, so
# isolated nodes survive a round trip.


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".nodes.jsonl")


def write_graph(g: Graph, path: str | Path) -> None:
    path = Path(path)
    for node in g.nodes():
        if "\t" in node or "\n" in node:
            raise GraphError(f"node id not serializable: {node!r}")
    with _sidecar(path).open("w", encoding="utf-8") as fh:
        for node in g.nodes():
            rec = {"id": node}
            rec.update(g.attrs(node))
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    with path.open("w", encoding="utf-8") as fh:
        for u, v, w in g.edges():
            fh.write(f"{u}\t{v}\t{w!r}\n")


def read_graph(path: str | Path) -> Graph:
    path = Path(path)
    g = Graph()
    sidecar = _sidecar(path)
    if not sidecar.exists():
        raise GraphError(f"missing node sidecar: {sidecar}")
    with sidecar.open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            node = rec.pop("id")
            g.add_node(node, **rec)
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GraphError(f"{path}:{lineno}: bad edge line")
            u, v, w = parts
            if not g.has_node(u) or not g.has_node(v):
                raise GraphError(f"{path}:{lineno}: edge endpoint missing from sidecar")
            g.add_edge(u, v, float(w))
    return g
