"""Offline corpus of users, lists and tweets backed by JSON Lines files.

The store is the stand-in for the social platform's data: it is loaded once
(single writer), indexed in memory, and then queried concurrently by the
rest of the pipeline.
"""

from __future__ import annotations

import json
import logging
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

from .errors import ParseError, UsageError

log = logging.getLogger(__name__)

KINDS = ("users", "lists", "tweets")

DEFAULT_MAX_TEXT_LEN = 280

_TS_Z = re.compile(r"Z$")


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp (Z suffix or explicit offset) to UTC."""
    if not isinstance(value, str) or not value:
        raise ValueError(f"bad timestamp: {value!r}")
    raw = _TS_Z.sub("+00:00", value)
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    """Render a UTC timestamp back to the on-disk form (second precision, Z)."""
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class UserProfile:
    id: str
    handle: str
    display_name: str = ""
    location: str | None = None
    description: str | None = None
    protected: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValueError("user id must be non-empty")
        if not self.handle:
            raise ValueError(f"user {self.id}: handle must be non-empty")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "handle": self.handle,
            "display_name": self.display_name,
            "location": self.location,
            "description": self.description,
            "protected": self.protected,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UserProfile":
        return cls(
            id=str(obj["id"]),
            handle=str(obj["handle"]),
            display_name=str(obj.get("display_name") or ""),
            location=obj.get("location"),
            description=obj.get("description"),
            protected=bool(obj.get("protected", False)),
        )


@dataclass(frozen=True)
class ListRecord:
    id: str
    label: str  # preserved verbatim; may be non-English or misspelled
    owner_id: str
    member_ids: frozenset[str]

    def __post_init__(self):
        if not self.id:
            raise ValueError("list id must be non-empty")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "owner_id": self.owner_id,
            "member_ids": sorted(self.member_ids),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ListRecord":
        return cls(
            id=str(obj["id"]),
            label=str(obj["label"]),
            owner_id=str(obj["owner_id"]),
            member_ids=frozenset(str(m) for m in obj["member_ids"]),
        )


@dataclass(frozen=True)
class Tweet:
    id: str
    user_id: str
    text: str
    created_at: datetime
    lang: str | None = None
    is_retweet: bool = False

    def __post_init__(self):
        if not self.id:
            raise ValueError("tweet id must be non-empty")
        if self.text is None:
            raise ValueError(f"tweet {self.id}: text must not be null")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "user_id": self.user_id,
            "text": self.text,
            "created_at": format_timestamp(self.created_at),
            "lang": self.lang,
            "is_retweet": self.is_retweet,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Tweet":
        return cls(
            id=str(obj["id"]),
            user_id=str(obj["user_id"]),
            text=obj["text"],
            created_at=parse_timestamp(obj["created_at"]),
            lang=obj.get("lang"),
            is_retweet=bool(obj.get("is_retweet", False)),
        )


_PARSERS = {
    "users": UserProfile.from_json,
    "lists": ListRecord.from_json,
    "tweets": Tweet.from_json,
}


@dataclass
class CorpusStore:
    """In-memory indexed corpus. Ingest first, then query."""

    max_text_len: int = DEFAULT_MAX_TEXT_LEN
    users: dict[str, UserProfile] = field(default_factory=dict)
    lists: dict[str, ListRecord] = field(default_factory=dict)
    tweets: dict[str, Tweet] = field(default_factory=dict)

    # secondary indexes
    _tweets_by_user: dict[str, list[str]] = field(default_factory=dict, repr=False)
    _lists_by_member: dict[str, set[str]] = field(default_factory=dict, repr=False)
    _tweet_order: list[str] = field(default_factory=list, repr=False)
    _order_dirty: bool = field(default=False, repr=False)
    # guards the lazy re-sort; queries are otherwise read-only and concurrent
    _order_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- ingestion ---------------------------------------------------------

    def ingest_jsonl(self, path: str | Path, kind: str) -> int:
        """Load one JSONL file of the given kind. All-or-nothing per file."""
        if kind not in KINDS:
            raise UsageError(f"unknown kind {kind!r}; expected one of {KINDS}")
        path = Path(path)
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read {path}: {exc}") from exc

        parse = _PARSERS[kind]
        records = []
        for line_no, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("line is not a JSON object")
                records.append(parse(obj))
            except (ValueError, KeyError, TypeError) as exc:
                # nothing committed: indexes untouched until the loop completes
                raise ParseError(path, line_no, f"bad {kind[:-1]} record: {exc}") from exc

        for record in records:
            self.add(record)
        return len(records)

    def add(self, record: UserProfile | ListRecord | Tweet) -> None:
        if isinstance(record, UserProfile):
            if record.id in self.users:
                log.warning("duplicate user id %s: overwriting", record.id)
            self.users[record.id] = record
        elif isinstance(record, ListRecord):
            if record.id in self.lists:
                log.warning("duplicate list id %s: overwriting", record.id)
                self._unindex_list(self.lists[record.id])
            self.lists[record.id] = record
            for member in record.member_ids:
                self._lists_by_member.setdefault(member, set()).add(record.id)
        elif isinstance(record, Tweet):
            if len(record.text) > self.max_text_len:
                log.warning(
                    "tweet %s: text length %d exceeds max %d (kept)",
                    record.id, len(record.text), self.max_text_len,
                )
            if record.id in self.tweets:
                log.warning("duplicate tweet id %s: overwriting", record.id)
                self._unindex_tweet(self.tweets[record.id])
            self.tweets[record.id] = record
            self._tweets_by_user.setdefault(record.user_id, []).append(record.id)
            self._tweet_order.append(record.id)
            self._order_dirty = True
        else:
            raise UsageError(f"cannot add record of type {type(record).__name__}")

    def _unindex_list(self, old: ListRecord) -> None:
        for member in old.member_ids:
            self._lists_by_member.get(member, set()).discard(old.id)

    def _unindex_tweet(self, old: Tweet) -> None:
        ids = self._tweets_by_user.get(old.user_id, [])
        if old.id in ids:
            ids.remove(old.id)
        if old.id in self._tweet_order:
            self._tweet_order.remove(old.id)

    def export_jsonl(self, path: str | Path, kind: str) -> int:
        """Write records back out, one JSON object per line, in id order."""
        if kind not in KINDS:
            raise UsageError(f"unknown kind {kind!r}; expected one of {KINDS}")
        table = {"users": self.users, "lists": self.lists, "tweets": self.tweets}[kind]
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            for rid in sorted(table):
                fh.write(json.dumps(table[rid].to_json(), ensure_ascii=False) + "\n")
        return len(table)

    # -- queries -----------------------------------------------------------

    def _chronological(self) -> list[str]:
        if self._order_dirty:
            with self._order_lock:
                if self._order_dirty:
                    # sort a copy: list.sort would expose an empty list to
                    # concurrent readers mid-sort
                    self._tweet_order = sorted(
                        self._tweet_order,
                        key=lambda tid: (self.tweets[tid].created_at, tid),
                    )
                    self._order_dirty = False
        return self._tweet_order

    def tweets_in_window(self, start: datetime, end: datetime) -> list[Tweet]:
        """Tweets with start <= created_at <= end, by (created_at, id)."""
        if start > end:
            raise UsageError(f"window start {start} is after end {end}")
        return [
            self.tweets[tid]
            for tid in self._chronological()
            if start <= self.tweets[tid].created_at <= end
        ]

    def tweets_by_user(self, user_id: str) -> list[Tweet]:
        """All tweets of one user, newest first. Unknown user: empty."""
        ids = self._tweets_by_user.get(user_id, [])
        ordered = sorted(ids, key=lambda tid: (self.tweets[tid].created_at, tid))
        return [self.tweets[tid] for tid in reversed(ordered)]

    def lists_containing(self, user_id: str) -> list[ListRecord]:
        """All lists whose member set contains the user, by list id."""
        return [self.lists[lid] for lid in sorted(self._lists_by_member.get(user_id, ()))]

    def all_tweets(self) -> Iterator[Tweet]:
        for tid in self._chronological():
            yield self.tweets[tid]

    def span(self) -> tuple[datetime, datetime] | None:
        order = self._chronological()
        if not order:
            return None
        return (self.tweets[order[0]].created_at, self.tweets[order[-1]].created_at)


def load_corpus(
    users_path: str | Path | None = None,
    lists_path: str | Path | None = None,
    tweets_path: str | Path | None = None,
    max_text_len: int = DEFAULT_MAX_TEXT_LEN,
) -> CorpusStore:
    """Convenience loader for the three corpus files (any subset)."""
    store = CorpusStore(max_text_len=max_text_len)
    if users_path:
        store.ingest_jsonl(users_path, "users")
    if lists_path:
        store.ingest_jsonl(lists_path, "lists")
    if tweets_path:
        store.ingest_jsonl(tweets_path, "tweets")
    return store
