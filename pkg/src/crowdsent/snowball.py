"""Community identification by chain-referral sampling over the user/list
graph, with keyword label filtering and human decision hooks.

Each round fetches the lists containing the current frontier users, keeps
the lists whose labels pass the keyword/human filter, and adds their
members as the next frontier. Profile filtering runs once at the end over
everyone the crawl accumulated (seeds are exempt), mirroring the brute
force closure-then-filter oracle the acceptance suite checks against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import UserProfile
from .errors import TransportError, UsageError
from .gateway import SourceGateway

log = logging.getLogger(__name__)

PENDING_POLICIES = ("halt", "reject")

STOP_TARGET = "target"
STOP_FIXED_POINT = "fixed-point"
STOP_MAX_ROUNDS = "max-rounds"
STOP_PENDING = "pending-decisions"


@dataclass(frozen=True)
class ProfileFilter:
    location_keywords: frozenset[str] = frozenset()
    description_keywords: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(
            self, "location_keywords", frozenset(k.casefold() for k in self.location_keywords)
        )
        object.__setattr__(
            self,
            "description_keywords",
            frozenset(k.casefold() for k in self.description_keywords),
        )

    @property
    def empty(self) -> bool:
        return not self.location_keywords and not self.description_keywords


@dataclass(frozen=True)
class SnowballConfig:
    seed_user_ids: frozenset[str]
    label_keywords: frozenset[str]
    max_rounds: int = 3
    target_size: int = 1_000_000
    profile_filter: ProfileFilter | None = None
    pending_policy: str = "halt"  # "reject" runs keyword-only, never blocking

    def __post_init__(self):
        if not self.seed_user_ids:
            raise UsageError("snowball needs at least one seed user")
        if self.max_rounds < 1:
            raise UsageError("max_rounds must be >= 1")
        if self.target_size < 1:
            raise UsageError("target_size must be >= 1")
        if self.pending_policy not in PENDING_POLICIES:
            raise UsageError(f"unknown pending policy {self.pending_policy!r}")
        for keyword in self.label_keywords:
            if keyword != keyword.casefold():
                raise UsageError(f"label keyword {keyword!r} must be lowercase")


@dataclass(frozen=True)
class LabelDecision:
    label: str
    verdict: str  # accept | reject | pending
    source: str  # keyword-auto | human


@dataclass
class SnowballRound:
    index: int
    candidate_lists: list[str] = field(default_factory=list)  # list ids seen
    accepted_lists: list[str] = field(default_factory=list)
    pending_labels: list[str] = field(default_factory=list)
    new_users: dict[str, str] = field(default_factory=dict)  # user id -> via list id


@dataclass
class CommunityMember:
    id: str
    via_round: int | None  # None marks a seed
    via_list: str | None

    def to_json(self) -> dict:
        return {"id": self.id, "via_round": self.via_round, "via_list": self.via_list}


@dataclass
class CommunitySet:
    members: dict[str, CommunityMember]
    rejected: dict[str, str]  # user id -> reason
    stop_reason: str | None
    rounds: list[SnowballRound]
    pending_labels: list[str]
    label_decisions: dict[str, LabelDecision]
    profiles: dict[str, UserProfile]
    round_sizes: list[int]  # member count after each round, pre profile filter
    label_list_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "members": [self.members[mid].to_json() for mid in sorted(self.members)],
            "rejected": [
                {"id": uid, "reason": self.rejected[uid]} for uid in sorted(self.rejected)
            ],
            "stop_reason": self.stop_reason,
            "pending_labels": sorted(self.pending_labels),
            "pending_label_context": {
                label: self.label_list_counts.get(label, 0)
                for label in sorted(self.pending_labels)
            },
            "rejected_profiles": {
                uid: {
                    "handle": p.handle,
                    "location": p.location,
                    "description": p.description,
                }
                for uid, p in sorted(self.profiles.items())
                if uid in self.rejected
            },
            "rounds": [
                {
                    "index": r.index,
                    "candidate_lists": sorted(r.candidate_lists),
                    "accepted_lists": sorted(r.accepted_lists),
                    "pending_labels": sorted(r.pending_labels),
                    "new_users": len(r.new_users),
                }
                for r in self.rounds
            ],
        }


def filter_labels(
    labels: Iterable[str],
    keywords: frozenset[str],
    decisions: Mapping[str, str] | None = None,
) -> tuple[set[str], set[str], set[str]]:
    """Split labels into accepted / rejected / pending.

    A human decision always wins; otherwise a label is accepted when its
    case-folded form contains any keyword as a substring, and pending when
    nothing matched (awaiting review).
    """
    decisions = decisions or {}
    accepted, rejected, pending = set(), set(), set()
    for label in labels:
        verdict = decisions.get(label)
        if verdict == "accept":
            accepted.add(label)
        elif verdict == "reject":
            rejected.add(label)
        else:
            folded = label.casefold()
            if any(keyword in folded for keyword in keywords):
                accepted.add(label)
            else:
                pending.add(label)
    return accepted, rejected, pending


def filter_members(
    profiles: Iterable[UserProfile],
    profile_filter: ProfileFilter | None,
    decisions: Mapping[str, str] | None = None,
) -> tuple[list[UserProfile], dict[str, str]]:
    """Keep profiles a human accepted or whose location/description hits a
    configured keyword; everything else is rejected with reason
    "profile-filter". An empty filter passes everyone undecided."""
    decisions = decisions or {}
    passed: list[UserProfile] = []
    rejected: dict[str, str] = {}
    for profile in profiles:
        verdict = decisions.get(profile.id)
        if verdict == "accept":
            passed.append(profile)
            continue
        if verdict == "reject":
            rejected[profile.id] = "profile-filter"
            continue
        if profile_filter is None or profile_filter.empty:
            passed.append(profile)
            continue
        location = (profile.location or "").casefold()
        description = (profile.description or "").casefold()
        if any(k in location for k in profile_filter.location_keywords) or any(
            k in description for k in profile_filter.description_keywords
        ):
            passed.append(profile)
        else:
            rejected[profile.id] = "profile-filter"
    return passed, rejected


class SnowballSampler:
    def __init__(
        self,
        config: SnowballConfig,
        gateway: SourceGateway,
        label_decisions: Mapping[str, str] | None = None,
        profile_decisions: Mapping[str, str] | None = None,
    ):
        self.config = config
        self.gateway = gateway
        self.label_decisions = dict(label_decisions or {})
        self.profile_decisions = dict(profile_decisions or {})
        self._fetched_lists: set[str] = set()
        self._counted_lists: set[str] = set()

    def run_round(self, state: CommunitySet, frontier: set[str], index: int) -> SnowballRound:
        """One expansion step: frontier users -> their lists -> new members."""
        result = SnowballRound(index=index)
        candidates = {}
        for user_id in sorted(frontier):
            try:
                for record in self.gateway.fetch_lists_containing(user_id):
                    candidates[record.id] = record
            except TransportError as exc:
                log.warning("skipping user %s this round: %s", user_id, exc)
        result.candidate_lists = sorted(candidates)
        for record in candidates.values():
            if record.id not in self._counted_lists:
                self._counted_lists.add(record.id)
                state.label_list_counts[record.label] = (
                    state.label_list_counts.get(record.label, 0) + 1
                )

        labels = {record.label for record in candidates.values()}
        accepted, rejected, pending = filter_labels(
            labels, self.config.label_keywords, self.label_decisions
        )
        result.pending_labels = sorted(pending)
        for label in sorted(labels):
            if label in state.label_decisions:
                continue
            if label in accepted or label in rejected:
                source = "human" if label in self.label_decisions else "keyword-auto"
                verdict = "accept" if label in accepted else "reject"
            else:
                source, verdict = "keyword-auto", "pending"
            state.label_decisions[label] = LabelDecision(label=label, verdict=verdict, source=source)

        if pending and self.config.pending_policy == "halt":
            return result

        accepted_list_ids = sorted(
            lid for lid, record in candidates.items() if record.label in accepted
        )
        result.accepted_lists = accepted_list_ids
        for list_id in accepted_list_ids:
            if list_id in self._fetched_lists:
                continue
            self._fetched_lists.add(list_id)
            try:
                members = self.gateway.fetch_list_members(list_id)
            except TransportError as exc:
                log.warning("skipping list %s this round: %s", list_id, exc)
                continue
            for profile in members:
                state.profiles.setdefault(profile.id, profile)
                if profile.id not in state.members and profile.id not in result.new_users:
                    result.new_users[profile.id] = list_id
        return result

    def run(self) -> CommunitySet:
        config = self.config
        state = CommunitySet(
            members={
                uid: CommunityMember(id=uid, via_round=None, via_list=None)
                for uid in config.seed_user_ids
            },
            rejected={},
            stop_reason=None,
            rounds=[],
            pending_labels=[],
            label_decisions={},
            profiles={},
            round_sizes=[],
            label_list_counts={},
        )
        frontier = set(config.seed_user_ids)
        for index in range(config.max_rounds):
            if len(state.members) >= config.target_size:
                state.stop_reason = STOP_TARGET
                break
            round_result = self.run_round(state, frontier, index)
            state.rounds.append(round_result)
            if round_result.pending_labels and config.pending_policy == "halt":
                state.pending_labels = round_result.pending_labels
                state.stop_reason = STOP_PENDING
                break
            for user_id, via_list in round_result.new_users.items():
                state.members[user_id] = CommunityMember(
                    id=user_id, via_round=index, via_list=via_list
                )
            state.round_sizes.append(len(state.members))
            frontier = set(round_result.new_users)
            if not frontier:
                state.stop_reason = STOP_FIXED_POINT
                break
        if state.stop_reason is None:
            state.stop_reason = (
                STOP_TARGET if len(state.members) >= config.target_size else STOP_MAX_ROUNDS
            )
        if state.stop_reason != STOP_PENDING:
            self._apply_profile_filter(state)
        return state

    def _apply_profile_filter(self, state: CommunitySet) -> None:
        # seeds are definitional members and never filtered out
        non_seed = [
            state.profiles.get(uid, UserProfile(id=uid, handle=uid))
            for uid in sorted(state.members)
            if state.members[uid].via_round is not None
        ]
        _, rejected = filter_members(
            non_seed, self.config.profile_filter, self.profile_decisions
        )
        for user_id, reason in rejected.items():
            del state.members[user_id]
            state.rejected[user_id] = reason


def run(
    config: SnowballConfig,
    gateway: SourceGateway,
    label_decisions: Mapping[str, str] | None = None,
    profile_decisions: Mapping[str, str] | None = None,
) -> CommunitySet:
    """Run the sampler to completion (or until human decisions are needed)."""
    return SnowballSampler(config, gateway, label_decisions, profile_decisions).run()
