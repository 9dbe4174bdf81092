"""Bot classification from usernames and identity-affiliation annotation.

The faithful bot route is an external scores file (user_id -> P(bot)); the
builtin username heuristic is a clearly labeled stand-in that keeps the
pipeline hermetic. Both apply the same threshold: P(bot) >= 0.5 is a bot.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

BOT_THRESHOLD = 0.5

IDENTITY_CATEGORIES = frozenset(
    {"political", "family", "gender", "race/nationality", "religion", "job", "other"}
)


class ScoresFileError(Exception):
    pass


class IdentityLexiconError(Exception):
    pass


@dataclass(frozen=True)
class BotVerdict:
    user_id: str
    p_bot: float
    label: str  # "bot" | "human"
    source: str  # "external-file" | "builtin-heuristic"


@dataclass(frozen=True)
class IdentityAnnotation:
    user_id: str
    matched_terms: tuple[str, ...]
    categories: frozenset[str]

    @property
    def has_identity(self) -> bool:
        return bool(self.categories)


def bot_label(p_bot: float) -> str:
    return "bot" if p_bot >= BOT_THRESHOLD else "human"


def load_bot_scores(path: str | Path) -> dict[str, float]:
    """CSV of user_id,p_bot rows; a literal header row is tolerated."""
    path = Path(path)
    scores: dict[str, float] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if lineno == 1 and [c.strip().lower() for c in row] == ["user_id", "p_bot"]:
                continue
            if len(row) != 2:
                raise ScoresFileError(f"{path}:{lineno}: expected 2 columns")
            user_id, raw = row
            try:
                p = float(raw)
            except ValueError as exc:
                raise ScoresFileError(f"{path}:{lineno}: bad probability {raw!r}") from exc
            if not 0.0 <= p <= 1.0:
                raise ScoresFileError(f"{path}:{lineno}: p_bot {p} outside [0, 1]")
            scores[user_id] = p
    return scores


# -- builtin username heuristic ------------------------------------------------


@dataclass(frozen=True)
class HeuristicWeights:
    digit_count: float
    digit_run: float
    entropy: float
    length: float
    dict_word: float
    bias: float


def load_heuristic_weights(path: str | Path | None = None) -> HeuristicWeights:
    if path is None:
        raw = resources.files("bridgenet.data").joinpath("bot_weights.json").read_text("utf-8")
    else:
        raw = Path(path).read_text("utf-8")
    return HeuristicWeights(**json.loads(raw))


def _dictionary() -> frozenset[str]:
    text = resources.files("bridgenet.data").joinpath("common_words.txt").read_text("utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


_DICTIONARY: frozenset[str] | None = None


def _default_dictionary() -> frozenset[str]:
    global _DICTIONARY
    if _DICTIONARY is None:
        _DICTIONARY = _dictionary()
    return _DICTIONARY


_CAMEL_SPLIT = re.compile(r"(?<=[a-z])(?=[A-Z])")
_NON_ALPHA = re.compile(r"[^A-Za-z]+")


def split_username(username: str) -> list[str]:
    """Alphabetic segments: split on _, -, ., digits, and camelCase bounds."""
    parts = []
    for chunk in _NON_ALPHA.split(username):
        if not chunk:
            continue
        parts.extend(p for p in _CAMEL_SPLIT.split(chunk) if p)
    return parts


def username_features(username: str, dictionary: frozenset[str] | None = None) -> dict[str, float]:
    if dictionary is None:
        dictionary = _default_dictionary()
    digits = sum(ch.isdigit() for ch in username)
    run = 0
    best_run = 0
    for ch in username:
        run = run + 1 if ch.isdigit() else 0
        best_run = max(best_run, run)
    counts: dict[str, int] = {}
    for ch in username:
        counts[ch] = counts.get(ch, 0) + 1
    total = len(username)
    entropy = 0.0
    for c in counts.values():
        p = c / total
        entropy -= p * math.log2(p)
    has_word = any(
        len(part) >= 3 and part.lower() in dictionary for part in split_username(username)
    )
    return {
        "digit_count": float(digits),
        "digit_run": float(best_run),
        "entropy": entropy,
        "length": float(total),
        "dict_word": 1.0 if has_word else 0.0,
    }


def heuristic_bot_probability(
    username: str,
    weights: HeuristicWeights | None = None,
    dictionary: frozenset[str] | None = None,
) -> float:
    if not username:
        return 0.5
    if weights is None:
        weights = load_heuristic_weights()
    f = username_features(username, dictionary)
    z = (
        weights.digit_count * f["digit_count"]
        + weights.digit_run * f["digit_run"]
        + weights.entropy * f["entropy"]
        + weights.length * f["length"]
        + weights.dict_word * f["dict_word"]
        + weights.bias
    )
    return 1.0 / (1.0 + math.exp(-z))


def bot_score(
    user_id: str,
    username: str,
    scores: dict[str, float] | None = None,
    strict: bool = False,
    weights: HeuristicWeights | None = None,
) -> BotVerdict:
    """Score one user: external file when available, heuristic otherwise.

    With `strict`, a user missing from the supplied scores is an error
    instead of a heuristic fallback.
    """
    if scores is not None and user_id in scores:
        p = scores[user_id]
        source = "external-file"
    elif scores is not None and strict:
        raise ScoresFileError(f"no bot score for user {user_id!r}")
    else:
        p = heuristic_bot_probability(username, weights=weights)
        source = "builtin-heuristic"
    return BotVerdict(user_id=user_id, p_bot=p, label=bot_label(p), source=source)


# -- identity annotation ---------------------------------------------------------


def load_identity_lexicon(path: str | Path) -> dict[str, str]:
    """CSV of term,category rows; categories must be one of the fixed seven."""
    path = Path(path)
    lexicon: dict[str, str] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if lineno == 1 and [c.strip().lower() for c in row] == ["term", "category"]:
                continue
            if len(row) != 2:
                raise IdentityLexiconError(f"{path}:{lineno}: expected 2 columns")
            term, category = row[0].strip().lower(), row[1].strip().lower()
            if category not in IDENTITY_CATEGORIES:
                raise IdentityLexiconError(
                    f"{path}:{lineno}: unknown category {category!r}"
                )
            if not term:
                raise IdentityLexiconError(f"{path}:{lineno}: empty term")
            lexicon[term] = category
    return lexicon


def default_identity_lexicon() -> dict[str, str]:
    with resources.as_file(
        resources.files("bridgenet.data").joinpath("identity_lexicon.csv")
    ) as path:
        return load_identity_lexicon(path)


def identity_annotate(
    username: str, lexicon: dict[str, str], user_id: str | None = None
) -> IdentityAnnotation:
    """Longest-match scan of the username against the identity lexicon.

    Case-insensitive; a greedy scan over the lowercased username subsumes
    delimiter and camel-case splitting. All matched categories are returned.
    """
    lowered = username.lower()
    by_length = sorted(lexicon, key=len, reverse=True)
    matched: list[str] = []
    i = 0
    while i < len(lowered):
        hit = None
        for term in by_length:
            if lowered.startswith(term, i):
                hit = term
                break
        if hit:
            if hit not in matched:
                matched.append(hit)
            i += len(hit)
        else:
            i += 1
    categories = frozenset(lexicon[t] for t in matched)
    return IdentityAnnotation(
        user_id=user_id if user_id is not None else username,
        matched_terms=tuple(matched),
        categories=categories,
    )
