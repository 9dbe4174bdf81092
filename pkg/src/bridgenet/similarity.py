"""Embedding-file loading and thresholded cosine-similarity graph construction.

The all-pairs comparison is blocked over row panels with float64 accumulation;
the edge set it produces is checked against a naive per-pair oracle in tests.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph_core import Graph
from .ingest import DocRecord

MAGIC = b"EMB1"
DEFAULT_THETA = 0.8
DEFAULT_BLOCK_SIZE = 256


class EmbeddingFormatError(Exception):
    """Corrupt or inconsistent embedding file; message names the byte offset."""


@dataclass
class EmbeddingMatrix:
    ids: list[str]
    vectors: np.ndarray  # (n, d) float32

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1]) if self.vectors.ndim == 2 else 0

    @property
    def degenerate_rows(self) -> list[int]:
        """Indices of all-zero rows (embeddings of empty documents)."""
        if self.n == 0:
            return []
        return [int(i) for i in np.flatnonzero(~self.vectors.any(axis=1))]


def write_embeddings(path: str | Path, ids: Sequence[str], vectors: np.ndarray) -> None:
    """Write the binary embedding layout.

    Layout: magic "EMB1", u32 n_docs, u32 dim (little-endian), then each id as
    u32 byte length + UTF-8 bytes, then n_docs*dim float32 row-major LE.
    """
    vectors = np.ascontiguousarray(vectors, dtype="<f4")
    if vectors.ndim != 2:
        raise ValueError("vectors must be a 2-D array")
    if vectors.shape[0] != len(ids):
        raise ValueError(f"{len(ids)} ids but {vectors.shape[0]} rows")
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate ids in embedding matrix")
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", vectors.shape[0], vectors.shape[1]))
        for doc_id in ids:
            raw = doc_id.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(vectors.tobytes())


def load_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Load an embedding file, validating magic, header, and payload size."""
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != MAGIC:
        raise EmbeddingFormatError(f"{path}: bad magic at byte 0")
    if len(data) < 12:
        raise EmbeddingFormatError(f"{path}: truncated header at byte {len(data)}")
    n, dim = struct.unpack_from("<II", data, 4)
    offset = 12
    ids = []
    for _ in range(n):
        if offset + 4 > len(data):
            raise EmbeddingFormatError(f"{path}: truncated id table at byte {offset}")
        (id_len,) = struct.unpack_from("<I", data, offset)
        offset += 4
        if offset + id_len > len(data):
            raise EmbeddingFormatError(f"{path}: truncated id at byte {offset}")
        ids.append(data[offset : offset + id_len].decode("utf-8"))
        offset += id_len
    payload = n * dim * 4
    if len(data) - offset != payload:
        raise EmbeddingFormatError(
            f"{path}: expected {payload} payload bytes at byte {offset}, "
            f"found {len(data) - offset}"
        )
    vectors = np.frombuffer(data, dtype="<f4", count=n * dim, offset=offset)
    vectors = vectors.reshape(n, dim).copy()
    if len(set(ids)) != len(ids):
        raise EmbeddingFormatError(f"{path}: duplicate doc ids")
    if not np.all(np.isfinite(vectors)):
        bad = int(np.flatnonzero(~np.isfinite(vectors).ravel())[0])
        raise EmbeddingFormatError(
            f"{path}: non-finite value at byte {offset + 4 * bad}"
        )
    return EmbeddingMatrix(ids=ids, vectors=vectors)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u, v) / (|u||v|) in float64; zero vectors compare as 0.0."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def hashed_embeddings(
    token_lists: Sequence[Sequence[str]],
    ids: Sequence[str],
    dim: int = 64,
    seed: int = 0,
) -> EmbeddingMatrix:
    """Deterministic feature-hashing vectors; stands in for a trained encoder.

    Identical token bags map to identical rows, shared tokens raise cosine
    similarity, empty docs map to zero rows. Enough structure for fixtures
    and hermetic end-to-end runs.
    """
    vectors = np.zeros((len(token_lists), dim), dtype=np.float64)
    cache: dict[str, np.ndarray] = {}
    for row, tokens in enumerate(token_lists):
        for tok in tokens:
            vec = cache.get(tok)
            if vec is None:
                vec = np.random.default_rng([seed, hash_token(tok)]).standard_normal(dim)
                cache[tok] = vec
            vectors[row] += vec
    norms = np.linalg.norm(vectors, axis=1)
    nonzero = norms > 0
    vectors[nonzero] /= norms[nonzero, None]
    return EmbeddingMatrix(ids=list(ids), vectors=vectors.astype(np.float32))


def hash_token(token: str) -> int:
    """Stable 63-bit FNV-1a hash (process-independent, unlike builtin hash)."""
    h = 0xCBF29CE484222325
    for byte in token.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h & 0x7FFFFFFFFFFFFFFF


def build_content_graph(
    emb: EmbeddingMatrix,
    records: Iterable[DocRecord],
    theta: float = DEFAULT_THETA,
    block_size: int = DEFAULT_BLOCK_SIZE,
    per_event: bool = False,
) -> Graph:
    """Thresholded similarity graph over documents.

    Edge (i, j) exists iff cosine(v_i, v_j) > theta (strict). Nodes carry
    platform, user, and event attributes from the ingest records. With
    `per_event`, only same-event pairs are compared.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    meta = {r.doc_id: r for r in records}
    missing = [doc_id for doc_id in emb.ids if doc_id not in meta]
    if missing:
        raise KeyError(
            f"{len(missing)} embedding ids missing from metadata: "
            + ", ".join(missing[:10])
        )
    g = Graph()
    for doc_id in emb.ids:
        r = meta[doc_id]
        g.add_node(
            doc_id,
            kind="content",
            platform=r.platform,
            user_id=r.user_id,
            username=r.username,
            event=r.event,
        )
    events = np.array([meta[doc_id].event for doc_id in emb.ids])
    for i, j, w in _threshold_pairs(emb.vectors, theta, block_size, events if per_event else None):
        g.add_edge(emb.ids[i], emb.ids[j], w)
    return g


def _threshold_pairs(
    vectors: np.ndarray,
    theta: float,
    block_size: int,
    events: np.ndarray | None,
):
    """Yield (i, j, cosine) for i < j with cosine > theta, in (i, j) order.

    Rows are L2-normalized once in float64; blocks are compared with a panel
    matmul. Zero rows stay zero and can never cross the threshold.
    """
    n = vectors.shape[0]
    if n == 0:
        return
    x = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1)
    nonzero = norms > 0
    x = x.copy()
    x[nonzero] /= norms[nonzero, None]
    for a in range(0, n, block_size):
        xa = x[a : a + block_size]
        for b in range(a, n, block_size):
            sims = xa @ x[b : b + block_size].T
            rows, cols = np.nonzero(sims > theta)
            order = np.lexsort((cols, rows))
            for r, c in zip(rows[order], cols[order]):
                i = a + int(r)
                j = b + int(c)
                if i >= j:
                    continue
                if events is not None and events[i] != events[j]:
                    continue
                yield i, j, float(sims[r, c])
