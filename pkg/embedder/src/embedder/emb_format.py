"""Binary embedding-matrix file layout.

Layout, all little-endian:

    bytes 0-3   magic "EMB1"
    bytes 4-7   u32 number of documents
    bytes 8-11  u32 vector dimension
    then, per document: u32 id byte length + UTF-8 id bytes
    then n_docs * dim float32 values, row-major

Ids align positionally with rows. This module is the producing side of the
interchange boundary; the analysis side ships its own reader.
"""

from __future__ import annotations

import io
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"EMB1"


class FormatError(Exception):
    pass


def pack(ids: Sequence[str], matrix: np.ndarray) -> bytes:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2:
        raise FormatError("matrix must be two-dimensional")
    n, dim = matrix.shape
    if n != len(ids):
        raise FormatError(f"{len(ids)} ids for {n} rows")
    if len(set(ids)) != len(ids):
        raise FormatError("ids must be unique")
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<II", n, dim))
    for doc_id in ids:
        encoded = doc_id.encode("utf-8")
        buf.write(struct.pack("<I", len(encoded)))
        buf.write(encoded)
    buf.write(matrix.tobytes())
    return buf.getvalue()


def unpack(data: bytes) -> tuple[list[str], np.ndarray]:
    if len(data) < 12 or data[:4] != MAGIC:
        raise FormatError("not an embedding file")
    n, dim = struct.unpack_from("<II", data, 4)
    pos = 12
    ids = []
    for _ in range(n):
        (length,) = struct.unpack_from("<I", data, pos)
        pos += 4
        ids.append(data[pos : pos + length].decode("utf-8"))
        pos += length
    expected = n * dim * 4
    if len(data) - pos != expected:
        raise FormatError(
            f"payload size mismatch: expected {expected}, found {len(data) - pos}"
        )
    matrix = np.frombuffer(data, dtype="<f4", count=n * dim, offset=pos).reshape(n, dim)
    return ids, matrix.copy()


def write_file(path: str | Path, ids: Sequence[str], matrix: np.ndarray) -> None:
    """Atomic write: the file appears complete or not at all."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(pack(ids, matrix))
    tmp.replace(path)


def read_file(path: str | Path) -> tuple[list[str], np.ndarray]:
    return unpack(Path(path).read_bytes())
