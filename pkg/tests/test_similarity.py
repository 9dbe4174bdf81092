import math

import numpy as np
import pytest

from bridgenet.ingest import DocRecord
from bridgenet.similarity import (
    EmbeddingFormatError,
    EmbeddingMatrix,
    build_content_graph,
    cosine,
    hashed_embeddings,
    load_embeddings,
    write_embeddings,
)


def _records(ids, platform="X", event="helene"):
    return [
        DocRecord(
            doc_id=doc_id, platform=platform, post_id=str(i), user_id=f"u{i}",
            username=f"user{i}", event=event, text="t", clean_text="t",
            degenerate=False,
        )
        for i, doc_id in enumerate(ids)
    ]


class TestEmbeddingFile:
    def test_roundtrip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(0)
        vecs = rng.standard_normal((7, 16)).astype(np.float32)
        ids = [f"X:{i}" for i in range(7)]
        path = tmp_path / "v.emb"
        write_embeddings(path, ids, vecs)
        m = load_embeddings(path)
        assert m.ids == ids
        assert m.vectors.tobytes() == vecs.tobytes()

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "v.emb"
        vecs = np.ones((3, 4), dtype=np.float32)
        write_embeddings(path, ["a", "b", "c"], vecs)
        data = path.read_bytes()
        path.write_bytes(data[:-5])
        with pytest.raises(EmbeddingFormatError, match="byte"):
            load_embeddings(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "v.emb"
        path.write_bytes(b"NOPE" + b"\x00" * 20)
        with pytest.raises(EmbeddingFormatError, match="magic"):
            load_embeddings(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "v.emb"
        vecs = np.ones((2, 2), dtype=np.float32)
        vecs[1, 0] = np.nan
        write_embeddings(path, ["a", "b"], vecs)
        with pytest.raises(EmbeddingFormatError, match="non-finite"):
            load_embeddings(path)

    def test_zero_row_loads_with_degenerate_flag(self, tmp_path):
        path = tmp_path / "v.emb"
        vecs = np.ones((3, 4), dtype=np.float32)
        vecs[1] = 0.0
        write_embeddings(path, ["a", "b", "c"], vecs)
        m = load_embeddings(path)
        assert m.degenerate_rows == [1]


class TestCosine:
    def test_identical_vectors(self):
        v = np.array([2.0, 3.0, -1.0])
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_forty_five_degrees(self):
        got = cosine(np.array([1.0, 0.0]), np.array([1.0, 1.0]))
        assert got == pytest.approx(math.sqrt(2) / 2, abs=1e-9)

    def test_zero_vector_convention(self):
        assert cosine(np.zeros(3), np.ones(3)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cosine(np.ones(3), np.ones(4))


class TestContentGraph:
    def test_pairwise_threshold_from_oracle(self):
        # three unit vectors at angles whose pairwise cosines straddle 0.8
        angles = [0.0, math.acos(0.9), math.acos(0.5)]
        vecs = np.array(
            [[math.cos(a), math.sin(a)] for a in angles], dtype=np.float32
        )
        ids = ["X:0", "X:1", "X:2"]
        expected = set()
        for i in range(3):
            for j in range(i + 1, 3):
                if cosine(vecs[i], vecs[j]) > 0.8:
                    expected.add((ids[i], ids[j]))
        g = build_content_graph(
            EmbeddingMatrix(ids=ids, vectors=vecs), _records(ids), theta=0.8
        )
        assert {(u, v) for u, v, _ in g.edges()} == expected
        assert len(expected) == 2

    def test_identical_vectors_complete_graph(self):
        vecs = np.tile(np.array([0.3, -0.2, 0.9], dtype=np.float32), (4, 1))
        ids = [f"X:{i}" for i in range(4)]
        g = build_content_graph(
            EmbeddingMatrix(ids=ids, vectors=vecs), _records(ids), theta=0.8
        )
        assert g.m == 6
        for _u, _v, w in g.edges():
            assert w == pytest.approx(1.0, abs=1e-12)

    def test_theta_one_excludes_everything(self):
        rng = np.random.default_rng(3)
        vecs = rng.standard_normal((10, 6)).astype(np.float32)
        ids = [f"X:{i}" for i in range(10)]
        g = build_content_graph(
            EmbeddingMatrix(ids=ids, vectors=vecs), _records(ids), theta=1.0
        )
        assert g.m == 0

    def test_unknown_doc_id_listed(self):
        vecs = np.ones((2, 3), dtype=np.float32)
        emb = EmbeddingMatrix(ids=["X:0", "X:MISSING"], vectors=vecs)
        with pytest.raises(KeyError, match="X:MISSING"):
            build_content_graph(emb, _records(["X:0"]), theta=0.8)

    def test_node_attributes_joined(self):
        vecs = np.eye(2, dtype=np.float32)
        ids = ["X:0", "X:1"]
        records = _records(ids)
        g = build_content_graph(EmbeddingMatrix(ids=ids, vectors=vecs), records)
        assert g.attrs("X:0")["platform"] == "X"
        assert g.attrs("X:0")["kind"] == "content"
        assert g.attrs("X:1")["user_id"] == "u1"

    def test_per_event_restricts_pairs(self):
        vecs = np.tile(np.array([1.0, 0.0], dtype=np.float32), (3, 1))
        ids = ["X:0", "X:1", "X:2"]
        records = _records(ids)
        records[2] = DocRecord(
            doc_id="X:2", platform="X", post_id="2", user_id="u2", username="user2",
            event="milton", text="t", clean_text="t", degenerate=False,
        )
        g = build_content_graph(
            EmbeddingMatrix(ids=ids, vectors=vecs), records, per_event=True
        )
        assert g.has_edge("X:0", "X:1")
        assert not g.has_edge("X:0", "X:2")
        assert not g.has_edge("X:1", "X:2")

    def _random_clustered(self, rng, n, d):
        centers = rng.standard_normal((max(2, n // 15), d))
        rows = []
        for i in range(n):
            c = centers[i % len(centers)]
            rows.append(c + 0.12 * rng.standard_normal(d))
        return np.array(rows, dtype=np.float32)

    @pytest.mark.parametrize("seed,n,d,block", [(0, 80, 8, 16), (1, 153, 8, 32), (2, 90, 24, 7), (3, 257, 8, 256)])
    def test_blocked_equals_naive(self, seed, n, d, block):
        rng = np.random.default_rng(seed)
        vecs = self._random_clustered(rng, n, d)
        ids = [f"X:{i}" for i in range(n)]
        g = build_content_graph(
            EmbeddingMatrix(ids=ids, vectors=vecs), _records(ids),
            theta=0.8, block_size=block,
        )
        built = {(u, v) for u, v, _ in g.edges()}
        naive = set()
        for i in range(n):
            for j in range(i + 1, n):
                if cosine(vecs[i], vecs[j]) > 0.8:
                    naive.add((ids[i], ids[j]))
        assert built == naive
        assert built, "generator should produce at least one edge"

    def test_simple_and_symmetric(self):
        rng = np.random.default_rng(5)
        vecs = self._random_clustered(rng, 60, 8)
        ids = [f"X:{i}" for i in range(60)]
        g = build_content_graph(EmbeddingMatrix(ids=ids, vectors=vecs), _records(ids))
        seen = set()
        for u, v, _w in g.edges():
            assert u != v
            assert (u, v) not in seen
            seen.add((u, v))
            assert g.has_edge(v, u)


class TestHashedEmbeddings:
    def test_deterministic_and_unit_norm(self):
        tokens = [("storm", "surge"), ("storm", "surge"), ("relief",), ()]
        ids = [f"X:{i}" for i in range(4)]
        a = hashed_embeddings(tokens, ids, dim=32, seed=9)
        b = hashed_embeddings(tokens, ids, dim=32, seed=9)
        assert a.vectors.tobytes() == b.vectors.tobytes()
        assert np.allclose(np.linalg.norm(a.vectors[:3], axis=1), 1.0, atol=1e-5)
        assert a.degenerate_rows == [3]
        assert cosine(a.vectors[0], a.vectors[1]) == pytest.approx(1.0, abs=1e-6)
