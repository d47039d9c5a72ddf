"""Evaluation and descriptive analytics: precision/recall, sample-based
recall estimation, analyzer precision against human labels, sentiment
distributions, participation, per-user category clustering, top
contributors, and analyzer agreement.

Percentages render at two decimals via exact rational arithmetic so reports
are reproducible byte-for-byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import IncompleteTaskError, UndefinedMetricError, UsageError
from .sentiment import CLASS_BY_LABEL, POLARITY_LABELS, SentimentClass, SentimentVerdict

THREE_WAY = ("Negative", "Neutral", "Positive")
FIVE_WAY = ("VeryNegative", "Negative", "Neutral", "Positive", "VeryPositive")

RELEVANCE_LABELS = ("relevant", "irrelevant")

POLARITY_TO_LABEL = dict(POLARITY_LABELS)


def percent(num: int | Fraction, den: int | Fraction) -> str:
    """Exact num/den as a percentage string with two decimals, half-up."""
    if den == 0:
        raise UndefinedMetricError("percentage of empty population")
    value = Fraction(num) / Fraction(den) * 100
    quantized = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP
    )
    return f"{quantized:.2f}"


def render_ratio(num: int, den: int) -> str:
    """num/den to two decimals (e.g. 25/30 -> '0.83')."""
    if den == 0:
        raise UndefinedMetricError("ratio with zero denominator")
    value = Fraction(num, den)
    return f"{(Decimal(value.numerator) / Decimal(value.denominator)).quantize(Decimal('0.01'), rounding=ROUND_HALF_UP):.2f}"


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn) < 0:
            raise UsageError("confusion counts must be non-negative")


def precision(c: ConfusionCounts) -> float:
    """Fraction of fetched items that are relevant: tp / (tp + fp)."""
    if c.tp + c.fp == 0:
        raise UndefinedMetricError("precision undefined: tp + fp = 0")
    return c.tp / (c.tp + c.fp)


def recall(c: ConfusionCounts) -> float:
    """Fraction of relevant items that were fetched: tp / (tp + fn)."""
    if c.tp + c.fn == 0:
        raise UndefinedMetricError("recall undefined: tp + fn = 0")
    return c.tp / (c.tp + c.fn)


# -- sampling ---------------------------------------------------------------


@dataclass
class SampleTask:
    task_id: str
    kind: str  # "relevance" | "sentiment"
    population: str  # descriptor of where the ids were drawn from
    seed: int
    labels: dict[str, str | None] = field(default_factory=dict)  # item id -> label

    def __post_init__(self):
        if self.kind not in ("relevance", "sentiment"):
            raise UsageError(f"unknown sample kind {self.kind!r}")

    @property
    def label_space(self) -> tuple[str, ...]:
        return RELEVANCE_LABELS if self.kind == "relevance" else THREE_WAY

    def set_label(self, item_id: str, label: str) -> None:
        if item_id not in self.labels:
            raise UsageError(f"item {item_id!r} is not part of task {self.task_id}")
        if label not in self.label_space:
            raise UsageError(
                f"label {label!r} outside task space {self.label_space}"
            )
        self.labels[item_id] = label

    def unlabeled(self) -> list[str]:
        return sorted(i for i, lab in self.labels.items() if lab is None)

    def require_complete(self) -> None:
        missing = self.unlabeled()
        if missing:
            raise IncompleteTaskError(
                f"task {self.task_id}: {len(missing)} unlabeled item(s)"
            )


def draw_sample(
    population: Iterable[str], n: int, seed: int, task_id: str, kind: str, descriptor: str = ""
) -> SampleTask:
    """Uniform draw without replacement; deterministic for a given seed
    regardless of input ordering."""
    if n < 1:
        raise UsageError("sample size must be >= 1")
    pool = sorted(set(population))
    if not pool:
        raise UsageError("cannot sample from an empty population")
    rng = random.Random(seed)
    drawn = rng.sample(pool, min(n, len(pool)))
    return SampleTask(
        task_id=task_id,
        kind=kind,
        population=descriptor,
        seed=seed,
        labels={item: None for item in drawn},
    )


def estimate_recall_by_sampling(task: SampleTask) -> float:
    """The missed-relevant estimator: draw n unfetched tweets, count the
    relevant ones as false negatives, return (n - fn) / n."""
    if task.kind != "relevance":
        raise UsageError("recall estimation needs a relevance task")
    task.require_complete()
    n = len(task.labels)
    fn = sum(1 for lab in task.labels.values() if lab == "relevant")
    return (n - fn) / n


def sample_precision(task: SampleTask) -> float:
    """Precision over a labeled sample of fetched tweets."""
    if task.kind != "relevance":
        raise UsageError("relevance precision needs a relevance task")
    task.require_complete()
    tp = sum(1 for lab in task.labels.values() if lab == "relevant")
    return precision(ConfusionCounts(tp=tp, fp=len(task.labels) - tp, fn=0))


# -- class collapsing and analyzer precision --------------------------------


def collapse_class(label: str) -> str:
    """5-way class label (or polarity label) to the 3-way space."""
    if label in THREE_WAY:
        return label
    cls = CLASS_BY_LABEL.get(label)
    if cls is None:
        raise UsageError(f"unknown sentiment label {label!r}")
    if cls <= SentimentClass.NEGATIVE:
        return "Negative"
    if cls >= SentimentClass.POSITIVE:
        return "Positive"
    return "Neutral"


def analyzer_precision(task: SampleTask, verdicts: Mapping[str, str]) -> float:
    """Share of sampled tweets whose collapsed analyzer class equals the
    human 3-way label."""
    if task.kind != "sentiment":
        raise UsageError("analyzer precision needs a sentiment task")
    task.require_complete()
    matches = 0
    for tweet_id, human in task.labels.items():
        if tweet_id not in verdicts:
            raise IncompleteTaskError(f"no analyzer verdict for sampled tweet {tweet_id}")
        if collapse_class(verdicts[tweet_id]) == collapse_class(human):
            matches += 1
    return matches / len(task.labels)


# -- distribution, participation, clusters ----------------------------------


@dataclass(frozen=True)
class DistributionReport:
    total: int
    counts: dict[str, int]  # per 5-way (or analyzer-native) class
    percentages: dict[str, str]  # two-decimal strings
    collapsed_counts: dict[str, int]
    collapsed_percentages: dict[str, str]

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "counts": self.counts,
            "percentages": self.percentages,
            "collapsed_counts": self.collapsed_counts,
            "collapsed_percentages": self.collapsed_percentages,
        }


def distribution_from_counts(counts: Mapping[str, int]) -> DistributionReport:
    total = sum(counts.values())
    full = {label: int(counts.get(label, 0)) for label in FIVE_WAY}
    for label, count in counts.items():
        if label not in FIVE_WAY:
            raise UsageError(f"unknown class label {label!r}")
        if count < 0:
            raise UsageError("counts must be non-negative")
    collapsed = {label: 0 for label in THREE_WAY}
    for label, count in full.items():
        collapsed[collapse_class(label)] += count
    if total == 0:
        empty = {label: "0.00" for label in FIVE_WAY}
        return DistributionReport(
            total=0,
            counts=full,
            percentages=empty,
            collapsed_counts=collapsed,
            collapsed_percentages={label: "0.00" for label in THREE_WAY},
        )
    return DistributionReport(
        total=total,
        counts=full,
        percentages={label: percent(count, total) for label, count in full.items()},
        collapsed_counts=collapsed,
        collapsed_percentages={
            label: percent(count, total) for label, count in collapsed.items()
        },
    )


def sentiment_distribution(verdicts: Iterable[SentimentVerdict]) -> DistributionReport:
    # polarity labels from the emoticon engine are a subset of the 5-way names
    counts: dict[str, int] = {}
    for verdict in verdicts:
        counts[verdict.class_label] = counts.get(verdict.class_label, 0) + 1
    return distribution_from_counts(counts)


@dataclass(frozen=True)
class ParticipationReport:
    participants: int
    community_size: int
    fraction: float
    percentage: str

    def to_json(self) -> dict:
        return {
            "participants": self.participants,
            "community_size": self.community_size,
            "fraction": self.fraction,
            "percentage": self.percentage,
        }


def participation(participant_count: int, community_size: int) -> ParticipationReport:
    if community_size <= 0:
        raise UsageError("community size must be positive")
    return ParticipationReport(
        participants=participant_count,
        community_size=community_size,
        fraction=participant_count / community_size,
        percentage=percent(participant_count, community_size),
    )


@dataclass(frozen=True)
class CategoryClusterReport:
    users: int
    buckets: dict[int, int]  # distinct-class count (1..5) -> number of users
    percentages: dict[int, str]

    def to_json(self) -> dict:
        return {
            "users": self.users,
            "buckets": {str(k): v for k, v in self.buckets.items()},
            "percentages": {str(k): v for k, v in self.percentages.items()},
        }


def category_clusters_from_labels(
    labels_by_user: Mapping[str, Sequence[str]]
) -> CategoryClusterReport:
    """Bucket users by how many distinct class labels their verdicts span."""
    buckets = {k: 0 for k in range(1, 6)}
    users = 0
    for user_id in sorted(labels_by_user):
        labels = labels_by_user[user_id]
        if not labels:
            continue
        users += 1
        buckets[min(len(set(labels)), 5)] += 1
    if users == 0:
        return CategoryClusterReport(
            users=0, buckets=buckets, percentages={k: "0.00" for k in buckets}
        )
    return CategoryClusterReport(
        users=users,
        buckets=buckets,
        percentages={k: percent(v, users) for k, v in buckets.items()},
    )


def category_clusters(
    verdicts_by_user: Mapping[str, Sequence[SentimentVerdict]]
) -> CategoryClusterReport:
    return category_clusters_from_labels(
        {user: [v.class_label for v in verdicts] for user, verdicts in verdicts_by_user.items()}
    )


def top_contributors(per_user: Mapping[str, int], k: int) -> list[tuple[str, int]]:
    """Users by event tweet count, descending; ties by ascending user id."""
    if k < 1:
        raise UsageError("k must be >= 1")
    ranked = sorted(per_user.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


@dataclass(frozen=True)
class AgreementReport:
    fraction: float
    total: int
    disagreements: tuple[tuple[str, str, str], ...]  # (tweet_id, label_a, label_b)

    def to_json(self) -> dict:
        return {
            "fraction": self.fraction,
            "total": self.total,
            "disagreements": [
                {"tweet_id": t, "a": a, "b": b} for t, a, b in self.disagreements
            ],
        }


def analyzer_agreement(
    verdicts_a: Mapping[str, str], verdicts_b: Mapping[str, str]
) -> AgreementReport:
    """Collapsed 3-way agreement between two analyzers over the same tweets."""
    if set(verdicts_a) != set(verdicts_b):
        raise UsageError("analyzer agreement needs identical tweet id sets")
    if not verdicts_a:
        raise UsageError("analyzer agreement over an empty verdict set")
    disagreements = []
    agree = 0
    for tweet_id in sorted(verdicts_a):
        a = collapse_class(verdicts_a[tweet_id])
        b = collapse_class(verdicts_b[tweet_id])
        if a == b:
            agree += 1
        else:
            disagreements.append((tweet_id, a, b))
    return AgreementReport(
        fraction=agree / len(verdicts_a),
        total=len(verdicts_a),
        disagreements=tuple(disagreements),
    )
