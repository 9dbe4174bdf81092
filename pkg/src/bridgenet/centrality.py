"""Node centrality metrics: degree, eigenvector, HITS hub, betweenness.

Degree and betweenness use hop semantics (weights ignored) to stay aligned
with the removal-based bridge definition; eigenvector and hub centrality use
edge weights. The split is recorded in report metadata.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .graph_core import Graph, connected_components


class ConvergenceError(RuntimeError):
    """Power iteration failed to settle within max_iter."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass
class CentralityScores:
    degree: float
    eigenvector: float
    hub: float
    betweenness: float


def degree_centrality(g: Graph) -> dict[str, float]:
    """deg(v) / (n - 1); a lone node scores 0."""
    n = g.n
    if n < 2:
        return {v: 0.0 for v in g.nodes()}
    return {v: g.degree(v) / (n - 1) for v in g.nodes()}


def _component_node_lists(g: Graph) -> list[list[str]]:
    labeling = connected_components(g)
    comps: dict[int, list[str]] = {}
    for node in g.nodes():
        comps.setdefault(labeling.labels[node], []).append(node)
    return [comps[cid] for cid in sorted(comps)]


def _power_iterate(
    g: Graph, nodes: list[str], tol: float, max_iter: int
) -> dict[str, float]:
    """Dominant eigenvector of one component's weighted adjacency.

    Iterates x <- (A + I) x, which shares eigenvectors with A but breaks the
    sign oscillation bipartite components would otherwise exhibit.
    """
    x = {v: 1.0 / len(nodes) ** 0.5 for v in nodes}
    diff = float("inf")
    for _ in range(max_iter):
        y = {}
        for v in nodes:
            acc = x[v]  # +I shift
            for u in g.neighbors(v):
                acc += g.weight(v, u) * x[u]
            y[v] = acc
        norm = sum(val * val for val in y.values()) ** 0.5
        if norm == 0.0:
            return {v: 0.0 for v in nodes}
        y = {v: val / norm for v, val in y.items()}
        diff = max(abs(y[v] - x[v]) for v in nodes)
        x = y
        if diff < tol:
            return x
    raise ConvergenceError(max_iter, diff)


def eigenvector_centrality(
    g: Graph, tol: float = 1e-10, max_iter: int = 1000
) -> dict[str, float]:
    """Per-component dominant eigenvector scores, globally L2-normalized.

    Requires at least one edge. Isolated nodes score 0.
    """
    if g.m == 0:
        raise ValueError("eigenvector centrality needs at least one edge")
    scores: dict[str, float] = {}
    for comp in _component_node_lists(g):
        if len(comp) == 1:
            scores[comp[0]] = 0.0
        else:
            scores.update(_power_iterate(g, comp, tol, max_iter))
    norm = sum(v * v for v in scores.values()) ** 0.5
    if norm > 0:
        scores = {k: v / norm for k, v in scores.items()}
    return {v: scores[v] for v in g.nodes()}


def hits_hub(g: Graph, tol: float = 1e-10, max_iter: int = 1000) -> dict[str, float]:
    """Hub scores from the mutual hub/authority iteration.

    On an undirected graph the hub and authority vectors coincide with the
    eigenvector direction; the metric is still computed and reported on its
    own. Uses the same +I shift as `eigenvector_centrality` so bipartite
    components converge.
    """
    if g.m == 0:
        raise ValueError("hub centrality needs at least one edge")
    scores: dict[str, float] = {}
    for comp in _component_node_lists(g):
        if len(comp) == 1:
            scores[comp[0]] = 0.0
            continue
        hub = {v: 1.0 / len(comp) ** 0.5 for v in comp}
        diff = float("inf")
        converged = False
        for _ in range(max_iter):
            auth = _shifted_apply(g, comp, hub)
            auth = _l2_normalized(auth)
            new_hub = _shifted_apply(g, comp, auth)
            new_hub = _l2_normalized(new_hub)
            diff = max(abs(new_hub[v] - hub[v]) for v in comp)
            hub = new_hub
            if diff < tol:
                converged = True
                break
        if not converged:
            raise ConvergenceError(max_iter, diff)
        scores.update(hub)
    norm = sum(v * v for v in scores.values()) ** 0.5
    if norm > 0:
        scores = {k: v / norm for k, v in scores.items()}
    return {v: scores[v] for v in g.nodes()}


def _shifted_apply(g: Graph, nodes: list[str], x: dict[str, float]) -> dict[str, float]:
    out = {}
    for v in nodes:
        acc = x[v]
        for u in g.neighbors(v):
            acc += g.weight(v, u) * x[u]
        out[v] = acc
    return out


def _l2_normalized(x: dict[str, float]) -> dict[str, float]:
    norm = sum(v * v for v in x.values()) ** 0.5
    if norm == 0.0:
        return dict(x)
    return {k: v / norm for k, v in x.items()}


def _brandes_accumulate(g: Graph, source: str, acc: dict[str, float]) -> None:
    """One single-source dependency accumulation (Brandes 2001), unweighted."""
    stack: list[str] = []
    pred: dict[str, list[str]] = {v: [] for v in g.nodes()}
    sigma: dict[str, int] = {v: 0 for v in g.nodes()}
    dist: dict[str, int] = {v: -1 for v in g.nodes()}
    sigma[source] = 1
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        stack.append(v)
        for w in g.neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                pred[w].append(v)
    delta = {v: 0.0 for v in g.nodes()}
    while stack:
        w = stack.pop()
        for v in pred[w]:
            delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
        if w != source:
            acc[w] += delta[w]


def betweenness(
    g: Graph,
    exact: bool = True,
    sample_size: int | None = None,
    seed: int = 0,
) -> dict[str, float]:
    """Betweenness centrality normalized into [0, 1].

    Exact mode accumulates from every source. Sampled mode accumulates from
    `sample_size` seeded pivot sources and rescales by n / sample_size, an
    unbiased estimate of the exact score.
    """
    nodes = g.nodes()
    n = len(nodes)
    acc = {v: 0.0 for v in nodes}
    if n < 3:
        return acc
    if exact:
        sources = nodes
        scale = 1.0
    else:
        if sample_size is None:
            raise ValueError("sampled mode requires sample_size")
        if sample_size > n:
            raise ValueError(f"sample_size {sample_size} exceeds node count {n}")
        if sample_size < 1:
            raise ValueError("sample_size must be >= 1")
        rng = random.Random(seed)
        sources = rng.sample(nodes, sample_size)
        scale = n / sample_size
    for s in sources:
        _brandes_accumulate(g, s, acc)
    # Each unordered pair is accumulated from both endpoints; the pair count
    # normalizer (n-1)(n-2)/2 therefore folds the 1/2 in.
    denom = (n - 1) * (n - 2)
    return {v: scale * val / denom for v, val in acc.items()}


def compute_all(
    g: Graph,
    tol: float = 1e-10,
    max_iter: int = 1000,
    exact: bool = True,
    sample_size: int | None = None,
    seed: int = 0,
) -> dict[str, CentralityScores]:
    """All four metrics per node; edgeless graphs get zero eigen/hub scores."""
    deg = degree_centrality(g)
    if g.m > 0:
        eig = eigenvector_centrality(g, tol=tol, max_iter=max_iter)
        hub = hits_hub(g, tol=tol, max_iter=max_iter)
    else:
        eig = {v: 0.0 for v in g.nodes()}
        hub = {v: 0.0 for v in g.nodes()}
    btw = betweenness(g, exact=exact, sample_size=sample_size, seed=seed)
    return {
        v: CentralityScores(
            degree=deg[v], eigenvector=eig[v], hub=hub[v], betweenness=btw[v]
        )
        for v in g.nodes()
    }
