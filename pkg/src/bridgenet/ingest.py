"""Parse multi-platform post records, clean text, and assign stable doc ids.

Input is JSON Lines (one post per line) or CSV with a fixed header. Document
ids are "<platform>:<post_id>", deterministic and collision-free across the
three platforms.
"""

from __future__ import annotations

import csv
import json
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

PLATFORMS = ("X", "YouTube", "Reddit")
_PLATFORM_BY_LOWER = {p.lower(): p for p in PLATFORMS}
EVENTS = ("helene", "milton", "other")

CSV_HEADER = ["platform", "post_id", "user_id", "username", "text", "event", "timestamp"]


class DatasetError(Exception):
    """Whole-file ingest failure (missing file, unusable format, mostly garbage)."""


@dataclass(frozen=True)
class Post:
    """One social-media item; the atomic ingest record."""

    doc_id: str
    platform: str
    post_id: str
    user_id: str
    username: str
    raw_text: str
    event: str
    timestamp: Optional[int] = None


@dataclass(frozen=True)
class CleanDoc:
    doc_id: str
    tokens: tuple[str, ...]

    @property
    def clean_text(self) -> str:
        return " ".join(self.tokens)

    @property
    def degenerate(self) -> bool:
        return not self.tokens


@dataclass
class RecordError:
    line: int
    reason: str


@dataclass
class ParseResult:
    posts: list[Post]
    errors: list[RecordError] = field(default_factory=list)
    duplicates_collapsed: int = 0


def make_doc_id(platform: str, post_id: str) -> str:
    return f"{platform}:{post_id}"


def _canonical_platform(raw: object) -> str:
    key = str(raw).strip().lower()
    if key not in _PLATFORM_BY_LOWER:
        raise ValueError(f"unknown platform {raw!r}")
    return _PLATFORM_BY_LOWER[key]


def _canonical_event(raw: object) -> str:
    key = str(raw or "").strip().lower()
    return key if key in ("helene", "milton") else "other"


def _record_to_post(rec: dict) -> Post:
    for field_name in ("platform", "post_id", "user_id"):
        if rec.get(field_name) in (None, ""):
            raise ValueError(f"missing field {field_name!r}")
    # text must be present but may be empty (degenerate posts are kept)
    if "text" not in rec or rec["text"] is None:
        raise ValueError("missing field 'text'")
    platform = _canonical_platform(rec["platform"])
    post_id = str(rec["post_id"])
    ts = rec.get("timestamp")
    if ts in (None, ""):
        timestamp = None
    else:
        timestamp = int(ts)
    return Post(
        doc_id=make_doc_id(platform, post_id),
        platform=platform,
        post_id=post_id,
        user_id=str(rec["user_id"]),
        username=str(rec.get("username", rec["user_id"])),
        raw_text=str(rec["text"]),
        event=_canonical_event(rec.get("event")),
        timestamp=timestamp,
    )


def parse_dataset(path: str | Path, format: str = "json-lines") -> ParseResult:
    """Parse all valid records in file order.

    Malformed records become per-record errors and processing continues; if
    more than half the records are malformed the whole file is rejected.
    Duplicate doc_ids collapse to the first occurrence.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such file: {path}")
    if format == "json-lines":
        raw_records = _iter_jsonl(path)
    elif format == "csv":
        raw_records = _iter_csv(path)
    else:
        raise DatasetError(f"unknown format {format!r}")

    posts: list[Post] = []
    errors: list[RecordError] = []
    seen: set[str] = set()
    duplicates = 0
    total = 0
    for lineno, rec, err in raw_records:
        total += 1
        if err is not None:
            errors.append(RecordError(line=lineno, reason=err))
            continue
        try:
            post = _record_to_post(rec)
        except (ValueError, TypeError) as exc:
            errors.append(RecordError(line=lineno, reason=str(exc)))
            continue
        if post.doc_id in seen:
            duplicates += 1
            continue
        seen.add(post.doc_id)
        posts.append(post)
    if total and len(errors) * 2 > total:
        raise DatasetError(
            f"{path}: {len(errors)} of {total} records malformed; refusing file"
        )
    return ParseResult(posts=posts, errors=errors, duplicates_collapsed=duplicates)


def _iter_jsonl(path: Path):
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                yield lineno, None, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(rec, dict):
                yield lineno, None, "record is not an object"
                continue
            yield lineno, rec, None


def _iter_csv(path: Path):
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return
        if header != CSV_HEADER:
            raise DatasetError(
                f"{path}: expected CSV header {','.join(CSV_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                yield lineno, None, f"expected {len(CSV_HEADER)} columns, got {len(row)}"
                continue
            yield lineno, dict(zip(CSV_HEADER, row)), None


def write_posts(posts: Iterable[Post], path: str | Path) -> None:
    """Serialize posts back to the JSON Lines input schema (round-trippable)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for p in posts:
            rec = {
                "platform": p.platform,
                "post_id": p.post_id,
                "user_id": p.user_id,
                "username": p.username,
                "text": p.raw_text,
                "event": p.event,
            }
            if p.timestamp is not None:
                rec["timestamp"] = p.timestamp
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


# -- text cleaning -----------------------------------------------------------

_URL_PREFIXES = ("http://", "https://", "www.")


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    if not words:
        raise DatasetError(f"stopword list {path} is empty")
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    text = resources.files("bridgenet.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_outer_punct(token: str, keep: str = "") -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]) and token[start] not in keep:
        start += 1
    while end > start and _is_punct(token[end - 1]) and token[end - 1] not in keep:
        # intra-word apostrophes survive; trailing ones do not
        end -= 1
    return token[start:end]


def clean_tokens(text: str, stopwords: frozenset[str]) -> tuple[str, ...]:
    """Tokenize and scrub one text.

    Rules: whitespace split; URLs dropped; @-mentions dropped; '#' stripped
    from hashtags; the retweet marker dropped (the quoted text stays); outer
    punctuation stripped except intra-word apostrophes; lowercased; stopwords
    removed.
    """
    out = []
    for raw in text.split():
        lowered = raw.lower()
        if lowered.startswith(_URL_PREFIXES):
            continue
        tok = _strip_outer_punct(raw, keep="@#'")
        if tok.startswith("@"):
            continue
        tok = tok.lstrip("#")
        tok = _strip_outer_punct(tok)
        tok = tok.lower()
        if not tok or tok == "rt":
            continue
        if tok.startswith(_URL_PREFIXES):
            continue
        if tok in stopwords:
            continue
        out.append(tok)
    return tuple(out)


def preprocess(post: Post, stopwords: frozenset[str]) -> CleanDoc:
    """Clean one post's text; empty output is allowed and flagged degenerate."""
    if not stopwords:
        raise ValueError("stopword set must be nonempty")
    return CleanDoc(doc_id=post.doc_id, tokens=clean_tokens(post.raw_text, stopwords))


# -- enriched per-document records (clean.jsonl) ------------------------------


@dataclass(frozen=True)
class DocRecord:
    """One row of clean.jsonl: cleaned doc joined with its post metadata."""

    doc_id: str
    platform: str
    post_id: str
    user_id: str
    username: str
    event: str
    text: str
    clean_text: str
    degenerate: bool
    timestamp: Optional[int] = None

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.clean_text.split())


def build_records(posts: Iterable[Post], stopwords: frozenset[str]) -> list[DocRecord]:
    records = []
    for post in posts:
        doc = preprocess(post, stopwords)
        records.append(
            DocRecord(
                doc_id=post.doc_id,
                platform=post.platform,
                post_id=post.post_id,
                user_id=post.user_id,
                username=post.username,
                event=post.event,
                text=post.raw_text,
                clean_text=doc.clean_text,
                degenerate=doc.degenerate,
                timestamp=post.timestamp,
            )
        )
    return records


def write_records(records: Iterable[DocRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for r in records:
            rec = {
                "doc_id": r.doc_id,
                "platform": r.platform,
                "post_id": r.post_id,
                "user_id": r.user_id,
                "username": r.username,
                "event": r.event,
                "text": r.text,
                "clean_text": r.clean_text,
                "degenerate": r.degenerate,
            }
            if r.timestamp is not None:
                rec["timestamp"] = r.timestamp
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[DocRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            records.append(
                DocRecord(
                    doc_id=rec["doc_id"],
                    platform=rec["platform"],
                    post_id=rec.get("post_id", ""),
                    user_id=rec["user_id"],
                    username=rec.get("username", rec["user_id"]),
                    event=rec.get("event", "other"),
                    text=rec.get("text", ""),
                    clean_text=rec.get("clean_text", ""),
                    degenerate=bool(rec.get("degenerate", not rec.get("clean_text"))),
                    timestamp=rec.get("timestamp"),
                )
            )
    return records
