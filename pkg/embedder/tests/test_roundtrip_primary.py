"""Cross-boundary acceptance: files from this encoder load in the analysis
package bit-exactly, ids aligned, normalized rows at unit length."""

import json

import numpy as np
import pytest

from embedder.cli import main
from embedder.emb_format import read_file

bridgenet_similarity = pytest.importorskip(
    "bridgenet.similarity", reason="analysis package not installed"
)


def _verdict(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def write_docs(path, texts):
    with path.open("w", encoding="utf-8") as fh:
        for i, text in enumerate(texts):
            fh.write(json.dumps({"doc_id": f"X:{i}", "clean_text": text}) + "\n")


def test_encoder_file_loads_in_analysis_package(tmp_path):
    docs = tmp_path / "clean.jsonl"
    texts = ["storm surge tampa", "flood relief fund", "", "storm relief tampa"]
    write_docs(docs, texts)
    out = tmp_path / "vectors.emb"
    code = main(
        ["--input", str(docs), "--model", "hash:128", "--normalize", "--out", str(out)]
    )
    assert code == 0

    own_ids, own_matrix = read_file(out)
    loaded = bridgenet_similarity.load_embeddings(out)

    ids_aligned = loaded.ids == own_ids == [f"X:{i}" for i in range(4)]
    bits_identical = loaded.vectors.tobytes() == own_matrix.tobytes()
    norms = np.linalg.norm(loaded.vectors.astype(np.float64), axis=1)
    norms_ok = all(abs(n - 1.0) < 1e-5 for i, n in enumerate(norms) if i != 2)
    zero_row_flagged = loaded.degenerate_rows == [2]

    _verdict(
        "embedder format round-trip (bit-identical floats, aligned ids, unit norms)",
        ids_aligned and bits_identical and norms_ok and zero_row_flagged,
    )


def test_threshold_graph_built_from_encoder_output(tmp_path):
    # encoded similar texts must carry through the downstream consumer
    docs = tmp_path / "clean.jsonl"
    write_docs(
        docs,
        ["storm surge tampa bay", "storm surge tampa bay", "completely different words"],
    )
    out = tmp_path / "vectors.emb"
    assert main(["--input", str(docs), "--model", "hash:64", "--out", str(out)]) == 0
    emb = bridgenet_similarity.load_embeddings(out)
    sim = bridgenet_similarity.cosine(emb.vectors[0], emb.vectors[1])
    assert sim == pytest.approx(1.0, abs=1e-6)
