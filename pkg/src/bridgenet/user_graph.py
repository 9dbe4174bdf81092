"""Projection of the content similarity graph onto its authors.

Two users are linked when they authored similar content; the edge weight is
the number of content-edge pairs between their documents, i.e. the
off-diagonal of B.S.Bt for user-document incidence B and content adjacency S.
The diagonal (a user similar to themselves) is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph_core import Graph
from .ingest import DocRecord


class MissingAuthorshipError(Exception):
    def __init__(self, orphans: list[str]):
        shown = ", ".join(orphans[:10])
        super().__init__(f"{len(orphans)} content nodes lack authorship: {shown}")
        self.orphans = orphans


@dataclass(frozen=True)
class Author:
    user_id: str
    platform: str
    username: str

    @property
    def node_id(self) -> str:
        # user ids are platform-scoped: the same handle on two platforms is
        # two distinct users
        return f"{self.platform}:{self.user_id}"


def authorship_from_records(records: Iterable[DocRecord]) -> dict[str, Author]:
    return {
        r.doc_id: Author(user_id=r.user_id, platform=r.platform, username=r.username)
        for r in records
    }


def build_user_graph(
    content: Graph,
    authors: Mapping[str, Author],
    binary: bool = False,
) -> Graph:
    """Project a content graph onto users.

    Every author of a content node becomes a user node even if isolated.
    With `binary`, edge weights collapse to 1.0.
    """
    orphans = [d for d in content.nodes() if d not in authors]
    if orphans:
        raise MissingAuthorshipError(orphans)
    g = Graph()
    for doc in content.nodes():
        a = authors[doc]
        if not g.has_node(a.node_id):
            g.add_node(
                a.node_id,
                kind="user",
                platform=a.platform,
                user_id=a.user_id,
                username=a.username,
            )
    weights: dict[tuple[str, str], float] = {}
    index = g.node_index()
    for d1, d2, _w in content.edges():
        u1 = authors[d1].node_id
        u2 = authors[d2].node_id
        if u1 == u2:
            continue  # self-loop excluded
        key = (u1, u2) if index[u1] < index[u2] else (u2, u1)
        weights[key] = weights.get(key, 0.0) + 1.0
    for (u1, u2), w in weights.items():
        g.add_edge(u1, u2, 1.0 if binary else w)
    return g


@dataclass
class UserGraphStats:
    n: int
    m: int
    total_weight: float
    degree_histogram: dict[int, int]
    platform_counts: dict[str, int]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "total_weight": self.total_weight,
            "degree_histogram": {str(k): v for k, v in sorted(self.degree_histogram.items())},
            "platform_counts": dict(sorted(self.platform_counts.items())),
        }


def user_graph_stats(g: Graph) -> UserGraphStats:
    hist: dict[int, int] = {}
    platforms: dict[str, int] = {}
    for node in g.nodes():
        d = g.degree(node)
        hist[d] = hist.get(d, 0) + 1
        p = g.attrs(node).get("platform", "unknown")
        platforms[p] = platforms.get(p, 0) + 1
    return UserGraphStats(
        n=g.n,
        m=g.m,
        total_weight=g.total_weight(),
        degree_histogram=hist,
        platform_counts=platforms,
    )
