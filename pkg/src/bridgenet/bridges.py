"""Bridging-node identification.

Two routes to the same answer: the heuristic pipeline (chain decomposition,
betweenness-ranked candidates, removal verification) and the exact route
(articulation points). The removal test is the arbiter in both; the heuristic
route can only miss nodes it never tested, never report a false bridge.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .centrality import betweenness
from .graph_core import (
    Graph,
    GraphError,
    articulation_points,
    remove_node_delta,
)


@dataclass
class ChainDecomposition:
    """DFS chain decomposition; edges covered by no chain are bridges."""

    chains: list[list[str]]
    bridge_edges: set[tuple[str, str]]
    two_edge_connected: bool
    preorder: dict[str, int]
    parent: dict[str, Optional[str]]
    cycle_anchors: set[str] = field(default_factory=set)


def _canon(u: str, v: str, index: dict[str, int]) -> tuple[str, str]:
    return (u, v) if index[u] < index[v] else (v, u)


def chain_decompose(g: Graph) -> ChainDecomposition:
    """Decompose the graph into chains grown from back edges.

    Every non-tree edge starts exactly one chain: the chain crosses the back
    edge from the ancestor endpoint, then climbs parent pointers until it
    reaches a vertex already visited by an earlier chain. Edges left over are
    exactly the graph's bridge edges. Chains that close a cycle (beyond the
    first chain of a component) start at articulation anchors.
    """
    index = g.node_index()
    preorder: dict[str, int] = {}
    parent: dict[str, Optional[str]] = {}
    order: list[str] = []
    roots: set[str] = set()
    counter = 0
    for root in g.nodes():
        if root in preorder:
            continue
        roots.add(root)
        parent[root] = None
        preorder[root] = counter
        counter += 1
        order.append(root)
        stack: list[tuple[str, Iterator[str]]] = [(root, iter(g.neighbors(root)))]
        while stack:
            node, it = stack[-1]
            for nbr in it:
                if nbr not in preorder:
                    parent[nbr] = node
                    preorder[nbr] = counter
                    counter += 1
                    order.append(nbr)
                    stack.append((nbr, iter(g.neighbors(nbr))))
                    break
            else:
                stack.pop()

    # back edges keyed by their ancestor endpoint, in DFS-number order
    back_from: dict[str, list[str]] = {v: [] for v in order}
    for u, v, _w in g.edges():
        if parent.get(u) == v or parent.get(v) == u:
            continue
        anc, desc = (u, v) if preorder[u] < preorder[v] else (v, u)
        back_from[anc].append(desc)
    for anc in back_from:
        back_from[anc].sort(key=preorder.__getitem__)

    chains: list[list[str]] = []
    covered: set[tuple[str, str]] = set()
    visited: set[str] = set()
    cycle_anchors: set[str] = set()
    first_chain_pending = set(roots)
    for u in order:
        visited.add(u)
        for v in back_from[u]:
            chain = [u]
            covered.add(_canon(u, v, index))
            node = v
            while node not in visited:
                visited.add(node)
                chain.append(node)
                nxt = parent[node]
                covered.add(_canon(node, nxt, index))
                node = nxt
            if node != chain[-1]:
                chain.append(node)
            is_cycle = chain[0] == chain[-1]
            root_cycle = u in first_chain_pending
            first_chain_pending.discard(u)
            if is_cycle and not root_cycle:
                cycle_anchors.add(u)
            chains.append(chain)

    bridge_edges = {
        _canon(u, v, index)
        for u, v, _w in g.edges()
        if _canon(u, v, index) not in covered
    }
    connected = len(roots) <= 1
    return ChainDecomposition(
        chains=chains,
        bridge_edges=bridge_edges,
        two_edge_connected=connected and not bridge_edges and g.n > 0,
        preorder=preorder,
        parent=parent,
        cycle_anchors=cycle_anchors,
    )


@dataclass
class BridgeFinding:
    node: str
    is_bridge: bool
    betweenness: float
    component_delta: int
    disconnected_pairs: int
    tested: bool = True

    def to_json(self) -> dict:
        return {
            "node": self.node,
            "is_bridge": self.is_bridge,
            "betweenness": self.betweenness,
            "component_delta": self.component_delta,
            "disconnected_pairs": self.disconnected_pairs,
            "tested": self.tested,
        }


@dataclass
class BridgeReport:
    mode: str
    findings: list[BridgeFinding]
    bridging_proportion: float

    def bridge_nodes(self) -> set[str]:
        return {f.node for f in self.findings if f.is_bridge}


def candidate_bridging_nodes(
    g: Graph,
    top_fraction: float = 0.1,
    decomposition: ChainDecomposition | None = None,
    scores: dict[str, float] | None = None,
) -> list[str]:
    """Candidate nodes ordered by descending betweenness.

    Takes the top betweenness fraction of nodes (zero-betweenness nodes can
    never be cut vertices and are skipped), then force-includes bridge-edge
    endpoints and cycle-chain anchors regardless of rank.
    """
    if not 0.0 < top_fraction <= 1.0:
        raise ValueError(f"top_fraction must lie in (0, 1], got {top_fraction}")
    if scores is None:
        scores = betweenness(g)
    if decomposition is None:
        decomposition = chain_decompose(g)
    index = g.node_index()
    ranked = sorted(
        (v for v in g.nodes() if scores[v] > 0.0),
        key=lambda v: (-scores[v], index[v]),
    )
    take = min(len(ranked), max(0, math.ceil(top_fraction * g.n - 1e-9)))
    chosen = set(ranked[:take])
    for u, v in decomposition.bridge_edges:
        chosen.add(u)
        chosen.add(v)
    chosen.update(decomposition.cycle_anchors)
    return sorted(chosen, key=lambda v: (-scores[v], index[v]))


def verify_bridging(
    g: Graph,
    candidates: Sequence[str],
    scores: dict[str, float] | None = None,
) -> list[BridgeFinding]:
    """Run the removal test on each candidate; canonical (node index) order."""
    for c in candidates:
        if not g.has_node(c):
            raise GraphError(f"candidate not in graph: {c!r}")
    if scores is None:
        scores = betweenness(g)
    index = g.node_index()
    findings = []
    for node in sorted(set(candidates), key=index.__getitem__):
        impact = remove_node_delta(g, node)
        findings.append(
            BridgeFinding(
                node=node,
                is_bridge=impact.component_delta > 0,
                betweenness=scores[node],
                component_delta=impact.component_delta,
                disconnected_pairs=impact.disconnected_pairs,
            )
        )
    return findings


def find_bridging_nodes(
    g: Graph,
    mode: str = "paper-pipeline",
    top_fraction: float = 0.1,
    per_cluster: bool = False,
) -> BridgeReport:
    """Full bridging analysis of a (pruned) graph.

    "paper-pipeline" chains the decomposition, candidate ranking, and removal
    verification; untested nodes are reported with a not-tested marker.
    "exact" labels articulation points directly, with the same evidence
    fields. With `per_cluster`, each cluster's induced subgraph is analyzed
    independently (requires cluster_id node attributes).
    """
    if mode not in ("paper-pipeline", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    if per_cluster:
        return _per_cluster(g, mode, top_fraction)
    findings = _analyze(g, mode, top_fraction)
    bridges = sum(1 for f in findings if f.is_bridge)
    proportion = bridges / g.n if g.n else 0.0
    return BridgeReport(mode=mode, findings=findings, bridging_proportion=proportion)


def _analyze(g: Graph, mode: str, top_fraction: float) -> list[BridgeFinding]:
    if g.n == 0:
        return []
    scores = betweenness(g)
    index = g.node_index()
    if mode == "exact":
        cut_nodes = articulation_points(g)
        findings = []
        for node in g.nodes():
            if node in cut_nodes:
                impact = remove_node_delta(g, node)
                delta, pairs = impact.component_delta, impact.disconnected_pairs
            else:
                # non-cut nodes cannot split their component; an isolated
                # node's own component vanishes with it
                delta = -1 if g.degree(node) == 0 else 0
                pairs = 0
            findings.append(
                BridgeFinding(
                    node=node,
                    is_bridge=node in cut_nodes,
                    betweenness=scores[node],
                    component_delta=delta,
                    disconnected_pairs=pairs,
                )
            )
        return findings
    decomp = chain_decompose(g)
    candidates = candidate_bridging_nodes(
        g, top_fraction=top_fraction, decomposition=decomp, scores=scores
    )
    verified = {f.node: f for f in verify_bridging(g, candidates, scores=scores)}
    findings = []
    for node in g.nodes():
        if node in verified:
            findings.append(verified[node])
        else:
            findings.append(
                BridgeFinding(
                    node=node,
                    is_bridge=False,
                    betweenness=scores[node],
                    component_delta=0,
                    disconnected_pairs=0,
                    tested=False,
                )
            )
    findings.sort(key=lambda f: index[f.node])
    return findings


def _per_cluster(g: Graph, mode: str, top_fraction: float) -> BridgeReport:
    clusters: dict[int, list[str]] = {}
    for node in g.nodes():
        cid = g.attrs(node).get("cluster_id")
        if cid is None:
            raise GraphError(f"node {node!r} lacks a cluster_id attribute")
        clusters.setdefault(cid, []).append(node)
    index = g.node_index()
    findings: list[BridgeFinding] = []
    for cid in sorted(clusters):
        sub = g.subgraph(clusters[cid])
        findings.extend(_analyze(sub, mode, top_fraction))
    findings.sort(key=lambda f: index[f.node])
    bridges = sum(1 for f in findings if f.is_bridge)
    return BridgeReport(
        mode=mode,
        findings=findings,
        bridging_proportion=bridges / g.n if g.n else 0.0,
    )


def write_findings(report: BridgeReport, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump([f.to_json() for f in report.findings], fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_findings(path: str | Path) -> list[BridgeFinding]:
    with Path(path).open(encoding="utf-8") as fh:
        rows = json.load(fh)
    return [
        BridgeFinding(
            node=r["node"],
            is_bridge=r["is_bridge"],
            betweenness=r["betweenness"],
            component_delta=r["component_delta"],
            disconnected_pairs=r["disconnected_pairs"],
            tested=r.get("tested", True),
        )
        for r in rows
    ]
