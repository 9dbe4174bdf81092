"""Document encoders and the encode-to-file entry point.

Two encoder families: transformer sentence-embedding models (loaded through
sentence-transformers, resolved by checkpoint name) and a deterministic
feature-hashing encoder (`hash:<dim>`) that needs no model download, used by
the test suite and for dry runs. Empty documents always yield zero rows.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import emb_format

DEFAULT_MODEL = "sentence-transformers/all-mpnet-base-v2"


class EncoderError(Exception):
    pass


@dataclass
class HashingEncoder:
    """Seedless deterministic encoder: token bags hashed into a fixed basis.

    Identical texts map to identical rows; token overlap raises cosine
    similarity. The digest-based construction is stable across processes.
    """

    dim: int

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        cache: dict[str, np.ndarray] = {}
        for row, text in enumerate(texts):
            for token in text.split():
                vec = cache.get(token)
                if vec is None:
                    digest = hashlib.sha256(token.encode("utf-8")).digest()
                    seed = int.from_bytes(digest[:8], "little")
                    vec = np.random.default_rng(seed).standard_normal(self.dim)
                    cache[token] = vec
                out[row] += vec
        norms = np.linalg.norm(out, axis=1)
        mask = norms > 0
        out[mask] /= norms[mask, None]
        return out.astype(np.float32)


class TransformerEncoder:
    def __init__(self, model_name: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderError(
                "sentence-transformers is not installed; "
                "install the 'models' extra or use a hash:<dim> model"
            ) from exc
        try:
            self._model = SentenceTransformer(model_name)
        except Exception as exc:
            raise EncoderError(f"cannot load model {model_name!r}: {exc}") from exc
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        # deterministic inference: no dropout, no shuffling, fixed batch order
        vectors = self._model.encode(
            list(texts),
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float32)


def resolve_encoder(model_name: str):
    if model_name.startswith("hash:"):
        raw = model_name.split(":", 1)[1]
        try:
            dim = int(raw)
        except ValueError as exc:
            raise EncoderError(f"bad hash encoder dimension {raw!r}") from exc
        if dim < 1:
            raise EncoderError(f"hash encoder dimension must be positive, got {dim}")
        return HashingEncoder(dim=dim)
    return TransformerEncoder(model_name)


def read_clean_docs(path: str | Path) -> list[tuple[str, str]]:
    """(doc_id, clean_text) pairs from a clean-records JSON Lines file."""
    path = Path(path)
    docs = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EncoderError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if "doc_id" not in rec:
                raise EncoderError(f"{path}:{lineno}: record lacks doc_id")
            docs.append((rec["doc_id"], rec.get("clean_text", "")))
    return docs


def encode_file(
    input_path: str | Path,
    model_name: str,
    out_path: str | Path,
    normalize: bool = False,
    batch_size: int = 64,
) -> tuple[int, int]:
    """Encode every document and write the matrix; returns (n_docs, dim).

    Rows keep input order. Documents with empty clean text become zero rows
    (a warning is printed for each). With `normalize`, nonzero rows are
    L2-normalized.
    """
    docs = read_clean_docs(input_path)
    encoder = resolve_encoder(model_name)
    ids = [doc_id for doc_id, _ in docs]
    rows = np.zeros((len(docs), encoder.dim), dtype=np.float32)
    nonempty = [(i, text) for i, (_, text) in enumerate(docs) if text.strip()]
    for start in range(0, len(nonempty), batch_size):
        batch = nonempty[start : start + batch_size]
        encoded = encoder.encode([text for _, text in batch])
        for (row, _), vec in zip(batch, encoded):
            rows[row] = vec
    for doc_id, text in docs:
        if not text.strip():
            print(f"warning: empty document {doc_id}, writing zero vector", file=sys.stderr)
    if normalize:
        norms = np.linalg.norm(rows.astype(np.float64), axis=1)
        mask = norms > 0
        rows[mask] = (rows[mask].astype(np.float64) / norms[mask, None]).astype(
            np.float32
        )
    emb_format.write_file(out_path, ids, rows)
    return len(ids), encoder.dim
