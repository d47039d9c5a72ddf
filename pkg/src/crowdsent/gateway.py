"""Rate-limited access to the data source.

Two interchangeable backends sit behind one gateway: a local fixture backend
reading a CorpusStore, and an HTTP backend speaking the JSON wire protocol
of the bundled mock server. The gateway owns credential rotation and the
sliding-window rate ledger; backends only move bytes.
"""

from __future__ import annotations

import logging
import math
import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence
from urllib.parse import quote

import requests

from .corpus import CorpusStore, ListRecord, Tweet, UserProfile
from .errors import (
    AccessDeniedError,
    RateLimitedError,
    TransportError,
    UsageError,
)

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 900.0  # seconds
DEFAULT_BUDGET = 15  # requests per window per credential
DEFAULT_PAGE_LIMIT = 200
DEFAULT_TIMELINE_CAP = 3200


@dataclass(frozen=True)
class Credential:
    key_id: str
    window: float = DEFAULT_WINDOW
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.budget < 1:
            raise UsageError(f"credential {self.key_id}: budget must be >= 1")
        if self.window <= 0:
            raise UsageError(f"credential {self.key_id}: window must be > 0")


@dataclass(frozen=True)
class TimelinePage:
    tweets: tuple[Tweet, ...]
    next_cursor: str | None


class RateLedger:
    """Per-credential sliding window of request timestamps.

    A grant at time g counts every prior grant with timestamp > g - window,
    so two grants exactly one window apart never share a window. All grant
    decisions are serialized through one lock (the gateway's only shared
    mutable state).
    """

    def __init__(self, credentials: Sequence[Credential]):
        if not credentials:
            raise UsageError("at least one credential is required")
        self.credentials = tuple(credentials)
        self._events: dict[str, deque[float]] = {c.key_id: deque() for c in credentials}
        self.grant_log: list[tuple[str, float]] = []
        self._lock = threading.Lock()

    def _earliest_slot(self, credential: Credential, now: float) -> float:
        events = self._events[credential.key_id]
        while events and events[0] <= now - credential.window:
            events.popleft()
        if len(events) < credential.budget:
            return now
        # full window: legal once enough old grants age out that a new one
        # leaves at most budget-1 inside
        kth = events[len(events) - credential.budget]
        slot = kth + credential.window
        # float absorption (tiny kth vs large window) can round slot down to
        # a time where kth still sits inside the window; step up until the
        # eviction predicate at `slot` actually drops it
        while slot - credential.window < kth:
            slot = math.nextafter(slot, math.inf)
        return slot

    def acquire(self, now: float) -> tuple[str, float]:
        """Credential with the earliest legal slot and the wait until then."""
        with self._lock:
            best_key, best_time = None, None
            for credential in self.credentials:
                slot = self._earliest_slot(credential, now)
                if best_time is None or slot < best_time:
                    best_key, best_time = credential.key_id, slot
            return best_key, max(0.0, best_time - now)

    def record(self, key_id: str, now: float) -> None:
        with self._lock:
            self._events[key_id].append(now)
            self.grant_log.append((key_id, now))


class _RetryAfter(Exception):
    def __init__(self, seconds: float):
        self.seconds = seconds


class _TransportFailure(Exception):
    pass


class FixtureBackend:
    """Serves requests straight from an in-memory corpus."""

    def __init__(self, store: CorpusStore):
        self.store = store

    def lists_containing(self, user_id: str) -> list[ListRecord]:
        return self.store.lists_containing(user_id)

    def list_members(self, list_id: str) -> list[UserProfile]:
        record = self.store.lists.get(list_id)
        if record is None:
            return []
        members = []
        for member_id in sorted(record.member_ids):
            profile = self.store.users.get(member_id)
            if profile is None:
                profile = UserProfile(id=member_id, handle=member_id)
            members.append(profile)
        return members

    def timeline_page(self, user_id: str, cursor: str | None, count: int) -> TimelinePage:
        profile = self.store.users.get(user_id)
        if profile is not None and profile.protected:
            raise AccessDeniedError(user_id)
        timeline = self.store.tweets_by_user(user_id)
        offset = int(cursor) if cursor else 0
        page = timeline[offset : offset + count]
        next_offset = offset + len(page)
        next_cursor = str(next_offset) if next_offset < len(timeline) else None
        return TimelinePage(tweets=tuple(page), next_cursor=next_cursor)


class HttpBackend:
    """JSON-over-HTTP backend for the wire protocol of crowdsent.mock_api."""

    def __init__(self, base_url: str, session: requests.Session | None = None, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()
        self.timeout = timeout

    def _get(self, path: str, params: dict | None = None, user_id: str = "?") -> dict:
        try:
            response = self.session.get(
                self.base_url + path, params=params, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise _TransportFailure(f"GET {path}: {exc}") from exc
        if response.status_code == 429:
            raise _RetryAfter(float(response.headers.get("Retry-After", "1")))
        if response.status_code == 403:
            raise AccessDeniedError(user_id)
        if response.status_code >= 400:
            raise _TransportFailure(f"GET {path}: HTTP {response.status_code}")
        return response.json()

    def lists_containing(self, user_id: str) -> list[ListRecord]:
        payload = self._get("/lists", params={"member": user_id}, user_id=user_id)
        return [ListRecord.from_json(obj) for obj in payload["lists"]]

    def list_members(self, list_id: str) -> list[UserProfile]:
        payload = self._get(f"/lists/{quote(list_id, safe='')}/members")
        return [UserProfile.from_json(obj) for obj in payload["users"]]

    def timeline_page(self, user_id: str, cursor: str | None, count: int) -> TimelinePage:
        params: dict = {"count": count}
        if cursor is not None:
            params["cursor"] = cursor
        payload = self._get(
            f"/users/{quote(user_id, safe='')}/timeline", params=params, user_id=user_id
        )
        return TimelinePage(
            tweets=tuple(Tweet.from_json(obj) for obj in payload["tweets"]),
            next_cursor=payload.get("next_cursor"),
        )


class SourceGateway:
    """Backend access with credential parallelism and rate limiting.

    blocking=True sleeps through exhausted budgets (with a logged wait);
    blocking=False raises RateLimitedError carrying the retry-after delay.
    The clock/sleep hooks exist so tests can run on simulated time.
    """

    def __init__(
        self,
        backend,
        credentials: Sequence[Credential],
        *,
        page_limit: int = DEFAULT_PAGE_LIMIT,
        blocking: bool = True,
        max_retries: int = 2,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.backend = backend
        self.ledger = RateLedger(credentials)
        self.page_limit = page_limit
        self.blocking = blocking
        self.max_retries = max_retries
        self._clock = clock
        self._sleep = sleep

    # -- rate limiting -------------------------------------------------------

    def acquire_slot(self, now: float | None = None) -> tuple[str, float]:
        """Peek at the next grant without recording it."""
        return self.ledger.acquire(self._clock() if now is None else now)

    def _take_slot(self) -> str:
        while True:
            now = self._clock()
            key_id, wait = self.ledger.acquire(now)
            if wait <= 0:
                self.ledger.record(key_id, now)
                return key_id
            if not self.blocking:
                raise RateLimitedError(wait)
            log.info("rate budget exhausted; waiting %.3fs for credential %s", wait, key_id)
            self._sleep(wait)

    def _request(self, fn, *args):
        failures = 0
        while True:
            key_id = self._take_slot()
            try:
                return fn(*args)
            except _RetryAfter as signal:
                log.info("throttled by source; honoring Retry-After %.3fs", signal.seconds)
                self._sleep(signal.seconds)
            except _TransportFailure as exc:
                failures += 1
                if failures > self.max_retries:
                    raise TransportError(str(exc), credential_id=key_id) from exc
                log.warning("transport failure (attempt %d): %s", failures, exc)

    # -- fetch operations ----------------------------------------------------

    def fetch_lists_containing(self, user_id: str) -> list[ListRecord]:
        lists = self._request(self.backend.lists_containing, user_id)
        return sorted(lists, key=lambda record: record.id)

    def fetch_list_members(self, list_id: str) -> list[UserProfile]:
        members = self._request(self.backend.list_members, list_id)
        return sorted(members, key=lambda profile: profile.id)

    def fetch_timeline(self, user_id: str, cap: int = DEFAULT_TIMELINE_CAP) -> list[Tweet]:
        """Newest-first timeline assembled by cursor pagination, one rate
        slot per page, truncated at cap."""
        if cap < 1:
            raise UsageError("timeline cap must be >= 1")
        tweets: list[Tweet] = []
        cursor: str | None = None
        while len(tweets) < cap:
            page = self._request(
                self.backend.timeline_page, user_id, cursor, min(self.page_limit, cap - len(tweets))
            )
            tweets.extend(page.tweets)
            if page.next_cursor is None:
                break
            if cursor is not None and page.next_cursor == cursor:
                raise TransportError(f"timeline cursor did not advance for user {user_id}")
            cursor = page.next_cursor
        return tweets[:cap]
