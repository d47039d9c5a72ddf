"""Independent oracles and small utilities shared across the test suite.

Everything here recomputes expected values by brute force, staying away
from the code paths under test.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from crowdsent.corpus import CorpusStore, ListRecord, Tweet, UserProfile

UTC = timezone.utc


def ts(day: int, hour: int = 0, minute: int = 0, month: int = 6, year: int = 2014) -> datetime:
    return datetime(year, month, day, hour, minute, tzinfo=UTC)


def make_tweet(tid: str, uid: str, text: str, when: datetime, **kw) -> Tweet:
    return Tweet(id=tid, user_id=uid, text=text, created_at=when, **kw)


def build_store(users=(), lists=(), tweets=()) -> CorpusStore:
    store = CorpusStore()
    for record in (*users, *lists, *tweets):
        store.add(record)
    return store


class SimClock:
    """Deterministic clock; sleep() advances it."""

    def __init__(self, start: float = 0.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def sleep(self, seconds: float) -> None:
        assert seconds >= 0
        self.now += seconds


def window_scan_ok(grants: list[tuple[str, float]], window: float, budget: int) -> bool:
    """Brute-force check: no credential exceeds budget in any sliding window.

    Checks every window starting at a grant time (the maximal-count windows).
    """
    by_key: dict[str, list[float]] = {}
    for key, when in grants:
        by_key.setdefault(key, []).append(when)
    for times in by_key.values():
        times.sort()
        for i, start in enumerate(times):
            count = sum(1 for t in times[i:] if t < start + window)
            if count > budget:
                return False
    return True


def snowball_closure_oracle(
    lists: list[ListRecord],
    seeds: set[str],
    keywords: set[str],
    location_keywords: set[str],
    profiles: dict[str, UserProfile],
    max_rounds: int | None = None,
) -> set[str]:
    """Breadth-first closure: repeatedly add members of every keyword-matching
    list containing a current member; then apply the profile filter with
    seeds exempt."""
    matching = [
        record
        for record in lists
        if any(k in record.label.casefold() for k in keywords)
    ]
    members = set(seeds)
    rounds = 0
    while True:
        if max_rounds is not None and rounds >= max_rounds:
            break
        added = set()
        for record in matching:
            if record.member_ids & members:
                added |= record.member_ids - members
        if not added:
            break
        members |= added
        rounds += 1
    if not location_keywords:
        return members
    kept = set()
    for uid in members:
        if uid in seeds:
            kept.add(uid)
            continue
        profile = profiles.get(uid)
        location = (profile.location or "").casefold() if profile else ""
        if any(k in location for k in location_keywords):
            kept.add(uid)
    return kept


def random_graph(rng: random.Random, n_users: int, n_lists: int):
    """Random user/list fixture for oracle-equivalence checks."""
    users = [
        UserProfile(
            id=f"u{i:03d}",
            handle=f"h{i:03d}",
            location=rng.choice(["Lahore Pakistan", "Karachi, Pakistan", "Oslo", None]),
            description=rng.choice(["journalist at large", "citizen", None]),
        )
        for i in range(n_users)
    ]
    labels = [
        "Journalists", "Pak Journos", "TV Anchors", "Cricket", "Foodies",
        "jounerlisum", "Media-persons", "Friends", "Tech people", "Anchors PK",
    ]
    lists = []
    for j in range(n_lists):
        size = rng.randrange(1, max(2, n_users // 4))
        member_ids = frozenset(
            u.id for u in rng.sample(users, min(size, len(users)))
        )
        lists.append(
            ListRecord(
                id=f"L{j:03d}",
                label=rng.choice(labels),
                owner_id=f"owner{j}",
                member_ids=member_ids,
            )
        )
    return users, lists


def spread_tweets(user_ids, texts, start: datetime, hours_step: int = 3):
    """One tweet per text, cycling users, spaced hours_step apart."""
    tweets = []
    for i, text in enumerate(texts):
        tweets.append(
            make_tweet(
                f"t{i:04d}",
                user_ids[i % len(user_ids)],
                text,
                start + timedelta(hours=i * hours_step),
            )
        )
    return tweets
