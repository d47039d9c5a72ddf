"""Event tweet selection: seed keywords in a time window, then keyword
expansion from word frequencies and a re-search with the union set.

Matching is substring containment on case-folded text with '#' removed, so
keywords hit inside hashtags and run-together tags.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Tweet, parse_timestamp, format_timestamp
from .errors import UsageError

EXPANSION_SOURCES = ("matched-tweets", "window-only")

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)  # letters/digits runs

MIN_TOKEN_LEN = 3


@dataclass(frozen=True)
class ExpansionConfig:
    source: str = "matched-tweets"
    sub_window: tuple[datetime, datetime] | None = None
    top_k: int = 25
    min_count: int = 3
    stopword_file: str | None = None

    def __post_init__(self):
        if self.source not in EXPANSION_SOURCES:
            raise UsageError(f"unknown expansion source {self.source!r}")
        if self.top_k < 1 or self.min_count < 1:
            raise UsageError("top_k and min_count must be positive")


@dataclass(frozen=True)
class EventSpec:
    name: str
    seed_keywords: frozenset[str]  # stored case-folded
    window: tuple[datetime, datetime]
    expansion: ExpansionConfig = ExpansionConfig()

    def __post_init__(self):
        if not self.seed_keywords:
            raise UsageError(f"event {self.name!r}: seed keywords must be non-empty")
        start, end = self.window
        if start > end:
            raise UsageError(f"event {self.name!r}: window start after end")
        object.__setattr__(
            self, "seed_keywords", frozenset(k.casefold() for k in self.seed_keywords)
        )
        sub = self.expansion.sub_window
        if sub is not None and not (start <= sub[0] and sub[1] <= end):
            raise UsageError(f"event {self.name!r}: sub_window outside event window")


@dataclass(frozen=True)
class KeywordSet:
    seeds: frozenset[str]
    approved: frozenset[str] = frozenset()
    pending: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seeds = frozenset(k.casefold() for k in self.seeds)
        object.__setattr__(self, "seeds", seeds)
        # approved expansions never duplicate seeds
        object.__setattr__(
            self, "approved", frozenset(k.casefold() for k in self.approved) - seeds
        )

    @property
    def all(self) -> frozenset[str]:
        return self.seeds | self.approved


@dataclass(frozen=True)
class EventMatch:
    event: str
    tweet_ids: tuple[str, ...]  # chronological (created_at, id)
    participants: frozenset[str]
    per_user: dict[str, int]

    def __post_init__(self):
        assert sum(self.per_user.values()) == len(self.tweet_ids)


@dataclass(frozen=True)
class ExpandedMatch:
    match: EventMatch
    seed_only_count: int
    expanded_count: int


def searchable_text(text: str) -> str:
    return text.casefold().replace("#", "")


def text_matches(text: str, keywords: Iterable[str]) -> bool:
    hay = searchable_text(text)
    return any(keyword in hay for keyword in keywords)


def match_tweets(tweets: Iterable[Tweet], event: EventSpec, keywords: KeywordSet) -> EventMatch:
    """Tweets inside the event window whose defolded text contains a keyword."""
    kws = keywords.all
    if not kws:
        raise UsageError(f"event {event.name!r}: no keywords to match")
    start, end = event.window
    hits: dict[str, Tweet] = {}
    for tweet in tweets:
        if start <= tweet.created_at <= end and tweet.id not in hits:
            if text_matches(tweet.text, kws):
                hits[tweet.id] = tweet
    ordered = sorted(hits.values(), key=lambda t: (t.created_at, t.id))
    per_user: dict[str, int] = {}
    for tweet in ordered:
        per_user[tweet.user_id] = per_user.get(tweet.user_id, 0) + 1
    return EventMatch(
        event=event.name,
        tweet_ids=tuple(t.id for t in ordered),
        participants=frozenset(per_user),
        per_user=per_user,
    )


def tokenize_for_counting(text: str) -> set[str]:
    """Distinct candidate tokens of one tweet (case-folded, '#' removed)."""
    return set(_TOKEN_RE.findall(searchable_text(text)))


def propose_keywords(
    tweets: Sequence[Tweet],
    event: EventSpec,
    current: KeywordSet,
    stopwords: frozenset[str] = frozenset(),
) -> list[tuple[str, int]]:
    """Rank expansion candidates by the number of distinct tweets using them."""
    cfg = event.expansion
    if cfg.source == "matched-tweets":
        matched = match_tweets(tweets, event, current)
        wanted = set(matched.tweet_ids)
        pool = [t for t in tweets if t.id in wanted]
    else:  # window-only: every community tweet in the (sub-)window
        start, end = cfg.sub_window if cfg.sub_window else event.window
        pool = [t for t in tweets if start <= t.created_at <= end]

    counts: dict[str, int] = {}
    for tweet in pool:
        for token in tokenize_for_counting(tweet.text):
            counts[token] = counts.get(token, 0) + 1

    existing = current.all
    candidates = [
        (token, count)
        for token, count in counts.items()
        if count >= cfg.min_count
        and len(token) >= MIN_TOKEN_LEN
        and not token.isdigit()
        and token not in stopwords
        and token not in existing
    ]
    candidates.sort(key=lambda item: (-item[1], item[0]))
    return candidates[: cfg.top_k]


def expand_and_rematch(
    tweets: Iterable[Tweet], event: EventSpec, keywords: KeywordSet, approved: Iterable[str]
) -> ExpandedMatch:
    """Re-search the same window with seeds plus the approved expansions."""
    tweets = list(tweets)
    before = match_tweets(tweets, event, keywords)
    expanded = KeywordSet(
        seeds=keywords.seeds, approved=keywords.approved | frozenset(approved)
    )
    after = match_tweets(tweets, event, expanded)
    return ExpandedMatch(
        match=after, seed_only_count=len(before.tweet_ids), expanded_count=len(after.tweet_ids)
    )


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().casefold()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_events(path: str | Path) -> list[EventSpec]:
    """Read the events.json description file."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise UsageError(f"{path}: expected a JSON array of event objects")
    specs = []
    for obj in raw:
        expansion = obj.get("expansion") or {}
        sub = expansion.get("sub_window")
        cfg = ExpansionConfig(
            source=expansion.get("source", "matched-tweets"),
            sub_window=(
                (parse_timestamp(sub["start"]), parse_timestamp(sub["end"])) if sub else None
            ),
            top_k=expansion.get("top_k", 25),
            min_count=expansion.get("min_count", 3),
            stopword_file=expansion.get("stopword_file"),
        )
        specs.append(
            EventSpec(
                name=obj["name"],
                seed_keywords=frozenset(obj["seed_keywords"]),
                window=(
                    parse_timestamp(obj["window"]["start"]),
                    parse_timestamp(obj["window"]["end"]),
                ),
                expansion=cfg,
            )
        )
    return specs


def event_to_json(event: EventSpec) -> dict:
    cfg = event.expansion
    sub = cfg.sub_window
    return {
        "name": event.name,
        "seed_keywords": sorted(event.seed_keywords),
        "window": {
            "start": format_timestamp(event.window[0]),
            "end": format_timestamp(event.window[1]),
        },
        "expansion": {
            "source": cfg.source,
            "sub_window": (
                {"start": format_timestamp(sub[0]), "end": format_timestamp(sub[1])}
                if sub
                else None
            ),
            "top_k": cfg.top_k,
            "min_count": cfg.min_count,
            "stopword_file": cfg.stopword_file,
        },
    }
