"""Lexicon-driven linguistic cues and per-cluster topic modeling.

The cue extractor counts psycholinguistic signal words against shipped
lexicons. Topics come from a seeded collapsed Gibbs sampler over bag-of-word
counts; fixed seed and sweep count give a bit-identical model.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from math import exp, log
from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import CleanDoc


class LexiconError(Exception):
    """Lexicon directory missing a required list; raised at load, not per call."""


class LdaError(Exception):
    pass


_LEXICON_ROLES = (
    "pronoun_first",
    "pronoun_second",
    "pronoun_third",
    "inclusive",
    "connective",
    "exclusive",
)


@dataclass(frozen=True)
class Lexicons:
    pronoun_first: frozenset[str]
    pronoun_second: frozenset[str]
    pronoun_third: frozenset[str]
    inclusive: frozenset[str]
    connective: frozenset[str]
    exclusive: frozenset[str]


def load_lexicons(directory: str | Path) -> Lexicons:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise LexiconError(f"no manifest.json in {directory}")
    manifest = json.loads(manifest_path.read_text("utf-8"))
    sets = {}
    for role in _LEXICON_ROLES:
        if role not in manifest:
            raise LexiconError(f"manifest missing role {role!r}")
        list_path = directory / manifest[role]
        if not list_path.exists():
            raise LexiconError(f"lexicon file missing: {list_path}")
        words = {
            w.strip().lower()
            for w in list_path.read_text("utf-8").splitlines()
            if w.strip()
        }
        sets[role] = frozenset(words)
    return Lexicons(**sets)


def default_lexicons() -> Lexicons:
    root = resources.files("bridgenet.data").joinpath("lexicons")
    with resources.as_file(root) as path:
        return load_lexicons(path)


@dataclass(frozen=True)
class CueVector:
    word_count: int
    avg_sentence_length: float
    all_caps_count: int
    pronoun_first: int
    pronoun_second: int
    pronoun_third: int
    inclusive_word_count: int
    connective_word_count: int
    exclusive_word_count: int

    @property
    def pronoun_counts(self) -> tuple[int, int, int]:
        return (self.pronoun_first, self.pronoun_second, self.pronoun_third)

    def to_row(self) -> dict:
        return {
            "word_count": self.word_count,
            "avg_sentence_length": self.avg_sentence_length,
            "all_caps_count": self.all_caps_count,
            "pronoun_first": self.pronoun_first,
            "pronoun_second": self.pronoun_second,
            "pronoun_third": self.pronoun_third,
            "inclusive_word_count": self.inclusive_word_count,
            "connective_word_count": self.connective_word_count,
            "exclusive_word_count": self.exclusive_word_count,
        }


CUE_FIELDS = tuple(
    CueVector(0, 0.0, 0, 0, 0, 0, 0, 0, 0).to_row().keys()
)

_SENTENCE_SPLIT = re.compile(r"[.!?]+")


def _strip_token(tok: str) -> str:
    return tok.strip("\"'`.,;:!?()[]{}<>~*-_/\\|")


def extract_cues(text: str, lexicons: Lexicons) -> CueVector:
    """Count cue words in one text.

    Words are whitespace tokens with outer punctuation stripped; lexicon
    membership is case-insensitive; all-caps counts tokens of length >= 2
    made entirely of uppercase letters; sentences split on runs of . ! ?.
    """
    words = [w for w in (_strip_token(t) for t in text.split()) if w]
    sentences = [s for s in _SENTENCE_SPLIT.split(text) if s.strip()]
    counts = dict.fromkeys(_LEXICON_ROLES, 0)
    all_caps = 0
    for w in words:
        if len(w) >= 2 and w.isalpha() and w.isupper():
            all_caps += 1
        lower = w.lower()
        if lower in lexicons.pronoun_first:
            counts["pronoun_first"] += 1
        if lower in lexicons.pronoun_second:
            counts["pronoun_second"] += 1
        if lower in lexicons.pronoun_third:
            counts["pronoun_third"] += 1
        if lower in lexicons.inclusive:
            counts["inclusive"] += 1
        if lower in lexicons.connective:
            counts["connective"] += 1
        if lower in lexicons.exclusive:
            counts["exclusive"] += 1
    return CueVector(
        word_count=len(words),
        avg_sentence_length=len(words) / len(sentences) if sentences else 0.0,
        all_caps_count=all_caps,
        pronoun_first=counts["pronoun_first"],
        pronoun_second=counts["pronoun_second"],
        pronoun_third=counts["pronoun_third"],
        inclusive_word_count=counts["inclusive"],
        connective_word_count=counts["connective"],
        exclusive_word_count=counts["exclusive"],
    )


# -- topic model ---------------------------------------------------------------


@dataclass
class TopicModel:
    k: int
    vocab: list[str]
    topic_word: np.ndarray  # (K, V), rows sum to 1
    doc_topic: np.ndarray  # (n, K), rows sum to 1
    doc_ids: list[str]
    perplexity_trace: list[float]

    @property
    def v(self) -> int:
        return len(self.vocab)


def lda_fit(
    docs: Sequence[CleanDoc],
    k: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iters: int = 200,
    seed: int = 0,
    min_count: int = 2,
) -> TopicModel:
    """Collapsed Gibbs sampling over bag-of-word counts.

    Vocabulary keeps words occurring at least `min_count` times across the
    corpus. Perplexity is recorded every 10 sweeps (and after the last); with
    a converging chain the trace trends downward.
    """
    if k < 1:
        raise LdaError(f"topic count must be >= 1, got {k}")
    if iters < 1:
        raise LdaError("at least one sweep required")
    if alpha is None:
        alpha = 50.0 / k

    freq: dict[str, int] = {}
    for doc in docs:
        for tok in doc.tokens:
            freq[tok] = freq.get(tok, 0) + 1
    vocab = sorted(w for w, c in freq.items() if c >= min_count)
    if not vocab:
        raise LdaError("empty vocabulary after frequency filtering")
    word_id = {w: i for i, w in enumerate(vocab)}

    doc_words: list[list[int]] = [
        [word_id[t] for t in doc.tokens if t in word_id] for doc in docs
    ]
    if sum(1 for ws in doc_words if ws) < k:
        raise LdaError(
            f"need at least {k} documents with in-vocabulary tokens"
        )

    n_docs, v = len(docs), len(vocab)
    rng = random.Random(seed)
    ndk = [[0] * k for _ in range(n_docs)]
    nkw = [[0] * v for _ in range(k)]
    nk = [0] * k
    nd = [len(ws) for ws in doc_words]
    z: list[list[int]] = []
    for d, ws in enumerate(doc_words):
        zs = []
        for w in ws:
            t = rng.randrange(k)
            zs.append(t)
            ndk[d][t] += 1
            nkw[t][w] += 1
            nk[t] += 1
        z.append(zs)

    vbeta = v * beta
    trace: list[float] = []
    for sweep in range(1, iters + 1):
        for d, ws in enumerate(doc_words):
            zs = z[d]
            row = ndk[d]
            for i, w in enumerate(ws):
                t = zs[i]
                row[t] -= 1
                nkw[t][w] -= 1
                nk[t] -= 1
                total = 0.0
                probs = []
                for tt in range(k):
                    p = (nkw[tt][w] + beta) / (nk[tt] + vbeta) * (row[tt] + alpha)
                    total += p
                    probs.append(total)
                r = rng.random() * total
                t = 0
                while probs[t] < r:
                    t += 1
                zs[i] = t
                row[t] += 1
                nkw[t][w] += 1
                nk[t] += 1
        # baseline at sweep 1, then every 10 sweeps, then the final sweep
        if sweep == 1 or sweep % 10 == 0 or sweep == iters:
            trace.append(_perplexity(doc_words, ndk, nkw, nk, nd, alpha, beta, k, v))

    topic_word = np.array(
        [[(nkw[t][w] + beta) / (nk[t] + vbeta) for w in range(v)] for t in range(k)],
        dtype=np.float64,
    )
    kalpha = k * alpha
    doc_topic = np.array(
        [
            [(ndk[d][t] + alpha) / (nd[d] + kalpha) for t in range(k)]
            for d in range(n_docs)
        ],
        dtype=np.float64,
    )
    return TopicModel(
        k=k,
        vocab=vocab,
        topic_word=topic_word,
        doc_topic=doc_topic,
        doc_ids=[doc.doc_id for doc in docs],
        perplexity_trace=trace,
    )


def _perplexity(doc_words, ndk, nkw, nk, nd, alpha, beta, k, v) -> float:
    vbeta = v * beta
    kalpha = k * alpha
    ll = 0.0
    n_tokens = 0
    for d, ws in enumerate(doc_words):
        denom = nd[d] + kalpha
        theta = [(ndk[d][t] + alpha) / denom for t in range(k)]
        for w in ws:
            p = 0.0
            for t in range(k):
                p += theta[t] * (nkw[t][w] + beta) / (nk[t] + vbeta)
            ll += log(p)
            n_tokens += 1
    if n_tokens == 0:
        return float("inf")
    return exp(-ll / n_tokens)


def top_words(model: TopicModel, topic: int, n: int) -> list[str]:
    """The n most probable words of a topic; ties break lexicographically."""
    if not 0 <= topic < model.k:
        raise LdaError(f"topic {topic} out of range for k={model.k}")
    order = sorted(
        range(model.v), key=lambda w: (-model.topic_word[topic, w], model.vocab[w])
    )
    return [model.vocab[w] for w in order[: min(n, model.v)]]
