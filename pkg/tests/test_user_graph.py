import random

import numpy as np
import pytest

from bridgenet.graph_core import Graph
from bridgenet.user_graph import (
    Author,
    MissingAuthorshipError,
    authorship_from_records,
    build_user_graph,
    user_graph_stats,
)
from bridgenet.ingest import DocRecord


def _author(user, platform="X"):
    return Author(user_id=user, platform=platform, username=f"{user}_name")


def _content(edges, docs):
    g = Graph()
    for d in docs:
        g.add_node(d, kind="content")
    for u, v in edges:
        g.add_edge(u, v, 0.9)
    return g


class TestProjection:
    def test_two_users_one_similar_pair(self):
        g = _content([("d1", "d2")], ["d1", "d2"])
        authors = {"d1": _author("u"), "d2": _author("w")}
        ug = build_user_graph(g, authors)
        assert ug.n == 2
        assert ug.weight("X:u", "X:w") == 1.0

    def test_self_similarity_excluded(self):
        g = _content([("d1", "d2")], ["d1", "d2"])
        authors = {"d1": _author("u"), "d2": _author("u")}
        ug = build_user_graph(g, authors)
        assert ug.n == 1
        assert ug.m == 0  # self-loop excluded, user still present

    def test_weights_match_dense_matrix_oracle(self):
        rng = random.Random(3)
        for trial in range(30):
            n_docs = rng.randrange(2, 40)
            n_users = rng.randrange(2, 12)
            docs = [f"d{i}" for i in range(n_docs)]
            authors = {d: _author(f"u{rng.randrange(n_users)}") for d in docs}
            edges = []
            for i in range(n_docs):
                for j in range(i + 1, n_docs):
                    if rng.random() < 0.2:
                        edges.append((docs[i], docs[j]))
            g = _content(edges, docs)
            ug = build_user_graph(g, authors)

            users = sorted({a.node_id for a in authors.values()})
            uix = {u: i for i, u in enumerate(users)}
            b = np.zeros((len(users), n_docs))
            s = np.zeros((n_docs, n_docs))
            for k, d in enumerate(docs):
                b[uix[authors[d].node_id], k] = 1.0
            for u, v in edges:
                i, j = docs.index(u), docs.index(v)
                s[i, j] = s[j, i] = 1.0
            proj = b @ s @ b.T
            for a in range(len(users)):
                for c in range(a + 1, len(users)):
                    expected = proj[a, c]
                    got = (
                        ug.weight(users[a], users[c])
                        if ug.has_edge(users[a], users[c])
                        else 0.0
                    )
                    assert got == expected, f"trial {trial}: {users[a]}-{users[c]}"
            # zero self-loops by construction
            for u in ug.nodes():
                assert not ug.has_edge(u, u)

    def test_weight_symmetry_and_total(self):
        rng = random.Random(9)
        docs = [f"d{i}" for i in range(20)]
        authors = {d: _author(f"u{rng.randrange(6)}") for d in docs}
        edges = []
        for i in range(20):
            for j in range(i + 1, 20):
                if rng.random() < 0.25:
                    edges.append((docs[i], docs[j]))
        g = _content(edges, docs)
        ug = build_user_graph(g, authors)
        cross_author = sum(
            1 for u, v in edges if authors[u].node_id != authors[v].node_id
        )
        assert sum(w for _, _, w in ug.edges()) * 2 == 2 * cross_author
        for u, v, w in ug.edges():
            assert ug.weight(v, u) == w

    def test_platform_scoped_identity(self):
        g = _content([("d1", "d2")], ["d1", "d2"])
        authors = {"d1": _author("same"), "d2": _author("same", platform="Reddit")}
        ug = build_user_graph(g, authors)
        assert ug.n == 2
        assert ug.m == 1  # same handle, different platforms -> two users

    def test_isolated_users_kept(self):
        g = _content([("d1", "d2")], ["d1", "d2", "d3"])
        authors = {"d1": _author("u"), "d2": _author("u"), "d3": _author("loner")}
        ug = build_user_graph(g, authors)
        assert ug.has_node("X:loner")
        assert ug.degree("X:loner") == 0

    def test_missing_authorship_lists_orphans(self):
        g = _content([("d1", "d2")], ["d1", "d2"])
        with pytest.raises(MissingAuthorshipError) as err:
            build_user_graph(g, {"d1": _author("u")})
        assert err.value.orphans == ["d2"]

    def test_binary_flag(self):
        g = _content([("d1", "d3"), ("d2", "d4")], ["d1", "d2", "d3", "d4"])
        authors = {
            "d1": _author("u"), "d2": _author("u"),
            "d3": _author("w"), "d4": _author("w"),
        }
        weighted = build_user_graph(g, authors)
        binary = build_user_graph(g, authors, binary=True)
        assert weighted.weight("X:u", "X:w") == 2.0
        assert binary.weight("X:u", "X:w") == 1.0

    def test_attributes_carried(self):
        g = _content([("d1", "d2")], ["d1", "d2"])
        authors = {"d1": _author("u"), "d2": _author("w", platform="YouTube")}
        ug = build_user_graph(g, authors)
        assert ug.attrs("X:u") == {
            "kind": "user", "platform": "X", "user_id": "u", "username": "u_name",
        }
        assert ug.attrs("YouTube:w")["platform"] == "YouTube"


class TestAuthorshipMap:
    def test_from_records(self):
        records = [
            DocRecord(
                doc_id="X:1", platform="X", post_id="1", user_id="alice",
                username="Alice", event="helene", text="t", clean_text="t",
                degenerate=False,
            )
        ]
        authors = authorship_from_records(records)
        assert authors["X:1"].node_id == "X:alice"


class TestStats:
    def test_empty_graph(self):
        stats = user_graph_stats(Graph())
        assert stats.n == 0 and stats.m == 0

    def test_triangle_of_users(self):
        g = Graph()
        for name in ["X:a", "X:b", "X:c"]:
            g.add_node(name, platform="X")
        g.add_edge("X:a", "X:b")
        g.add_edge("X:b", "X:c")
        g.add_edge("X:a", "X:c")
        stats = user_graph_stats(g)
        assert stats.m == 3
        assert stats.degree_histogram == {2: 3}
        assert stats.platform_counts == {"X": 3}
