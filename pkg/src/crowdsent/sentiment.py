"""Two deterministic rule-based sentiment engines behind one verdict type.

The fine-grained engine scores valence words with negation/intensifier
windows and maps the sum onto five ordered classes. The emoticon-first
engine decides polarity from emoticons alone whenever any are present, and
only falls back to emotion-lexicon words otherwise.

The per-token scoring loop is the pipeline's hot spot; it runs through a
compiled kernel when the extension built, else the pure-Python twin.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable

from .errors import UsageError
from .lexicons import LexiconBundle

try:
    from . import _scoring as _kernel  # type: ignore[attr-defined]

    KERNEL = "compiled"
except ImportError:  # extension not built; same arithmetic, slower
    from . import _scoring_py as _kernel  # type: ignore[no-redef]

    KERNEL = "python"

ANALYZER_FINE = "fine-grained"
ANALYZER_EMOTICON = "emoticon-first"
ANALYZERS = (ANALYZER_FINE, ANALYZER_EMOTICON)

POLARITY_LABELS = {-1: "Negative", 0: "Neutral", 1: "Positive"}


class SentimentClass(IntEnum):
    VERY_NEGATIVE = 0
    NEGATIVE = 1
    NEUTRAL = 2
    POSITIVE = 3
    VERY_POSITIVE = 4

    @property
    def label(self) -> str:
        return _CLASS_LABELS[self]


_CLASS_LABELS = {
    SentimentClass.VERY_NEGATIVE: "VeryNegative",
    SentimentClass.NEGATIVE: "Negative",
    SentimentClass.NEUTRAL: "Neutral",
    SentimentClass.POSITIVE: "Positive",
    SentimentClass.VERY_POSITIVE: "VeryPositive",
}
CLASS_BY_LABEL = {label: cls for cls, label in _CLASS_LABELS.items()}


@dataclass(frozen=True)
class EmotionProfile:
    weights: dict[str, float]
    polarity: int
    dominant: str | None

    def __post_init__(self):
        if self.polarity not in (-1, 0, 1):
            raise ValueError(f"polarity must be -1/0/+1, got {self.polarity}")


@dataclass(frozen=True)
class SentimentVerdict:
    tweet_id: str
    analyzer: str
    score: float
    fine_class: SentimentClass | None = None
    profile: EmotionProfile | None = None

    def __post_init__(self):
        if self.analyzer == ANALYZER_FINE and (self.fine_class is None or self.profile is not None):
            raise ValueError("fine-grained verdicts carry exactly a class")
        if self.analyzer == ANALYZER_EMOTICON and (self.profile is None or self.fine_class is not None):
            raise ValueError("emoticon-first verdicts carry exactly a profile")

    @property
    def class_label(self) -> str:
        """5-way label for the fine engine, 3-way polarity label otherwise."""
        if self.fine_class is not None:
            return self.fine_class.label
        return POLARITY_LABELS[self.profile.polarity]

    def to_json(self) -> dict:
        obj = {"tweet_id": self.tweet_id, "analyzer": self.analyzer, "score": self.score}
        if self.fine_class is not None:
            obj["class"] = self.fine_class.label
        else:
            obj["polarity"] = self.profile.polarity
            obj["emotions"] = dict(sorted(self.profile.weights.items()))
        return obj


@dataclass(frozen=True)
class EngineParams:
    negator_window: int = 3
    intensifier_window: int = 2
    very_negative_max: float = -3.0
    negative_max: float = -1.0
    positive_min: float = 1.0
    very_positive_min: float = 3.0


DEFAULT_PARAMS = EngineParams()


def _emoticon_scan_order(bundle: LexiconBundle) -> tuple[str, ...]:
    # longest first so ":))" wins over ":)"
    return tuple(sorted(bundle.emoticons, key=lambda lit: (-len(lit), lit)))


def tokenize(text: str, bundle: LexiconBundle) -> list[str]:
    """Case-folded tokens: emoticon literals kept atomic, words split on
    everything but letters/digits/internal apostrophes."""
    folded = text.casefold().replace("’", "'")
    literals = _emoticon_scan_order(bundle)
    tokens: list[str] = []
    i, n = 0, len(folded)
    while i < n:
        matched = None
        for lit in literals:
            if folded.startswith(lit, i):
                matched = lit
                break
        if matched:
            tokens.append(matched)
            i += len(matched)
            continue
        ch = folded[i]
        if ch.isalnum():
            j = i + 1
            while j < n and (
                folded[j].isalnum()
                or (folded[j] == "'" and j + 1 < n and folded[j + 1].isalnum())
            ):
                j += 1
            tokens.append(folded[i:j])
            i = j
            continue
        i += 1
    return tokens


def score_tokens(tokens: list[str], bundle: LexiconBundle, params: EngineParams) -> float:
    values = array("d", (bundle.valence.get(tok, 0.0) for tok in tokens))
    flags = array("b", (1 if tok in bundle.negators else 0 for tok in tokens))
    mults = array("d", (bundle.intensifiers.get(tok, 1.0) for tok in tokens))
    return _kernel.valence_score(
        values, flags, mults, params.negator_window, params.intensifier_window
    )


def class_from_score(score: float, params: EngineParams = DEFAULT_PARAMS) -> SentimentClass:
    if score <= params.very_negative_max:
        return SentimentClass.VERY_NEGATIVE
    if score <= params.negative_max:
        return SentimentClass.NEGATIVE
    if score < params.positive_min:
        return SentimentClass.NEUTRAL
    if score < params.very_positive_min:
        return SentimentClass.POSITIVE
    return SentimentClass.VERY_POSITIVE


def classify_fine(
    text: str,
    bundle: LexiconBundle,
    params: EngineParams = DEFAULT_PARAMS,
    tweet_id: str = "",
) -> SentimentVerdict:
    tokens = tokenize(text, bundle)
    score = score_tokens(tokens, bundle, params) if tokens else 0.0
    return SentimentVerdict(
        tweet_id=tweet_id,
        analyzer=ANALYZER_FINE,
        score=score,
        fine_class=class_from_score(score, params),
    )


def _dominant(weights: dict[str, float]) -> str | None:
    if not weights:
        return None
    # highest weight wins; equal weights fall back to emotion name order
    return min(weights, key=lambda emo: (-weights[emo], emo))


def classify_emoticon_first(
    text: str,
    bundle: LexiconBundle,
    tweet_id: str = "",
) -> SentimentVerdict:
    tokens = tokenize(text, bundle)
    found = [tok for tok in tokens if tok in bundle.emoticons]
    weights: dict[str, float] = {}
    if found:
        # emoticons decide alone; word content is not consulted at all
        total = 0
        for lit in found:
            polarity, emotion = bundle.emoticons[lit]
            total += polarity
            weights[emotion] = weights.get(emotion, 0.0) + 1.0
        polarity = (total > 0) - (total < 0)
        score = float(total)
    else:
        for tok in tokens:
            hit = bundle.emotions.get(tok)
            if hit is not None:
                emotion, weight = hit
                weights[emotion] = weights.get(emotion, 0.0) + weight
        dominant = _dominant(weights)
        polarity = bundle.emotion_valence[dominant] if dominant is not None else 0
        score = float(polarity)
    profile = EmotionProfile(weights=weights, polarity=polarity, dominant=_dominant(weights))
    return SentimentVerdict(
        tweet_id=tweet_id, analyzer=ANALYZER_EMOTICON, score=score, profile=profile
    )


def classify_event(
    items: Iterable[tuple[str, str]],
    analyzer: str,
    bundle: LexiconBundle,
    params: EngineParams = DEFAULT_PARAMS,
) -> tuple[list[SentimentVerdict], dict[str, int]]:
    """Classify (tweet_id, text) pairs; returns verdicts plus per-class counts."""
    if analyzer == ANALYZER_FINE:
        classify = lambda tid, text: classify_fine(text, bundle, params, tweet_id=tid)
    elif analyzer == ANALYZER_EMOTICON:
        classify = lambda tid, text: classify_emoticon_first(text, bundle, tweet_id=tid)
    else:
        raise UsageError(f"unknown analyzer {analyzer!r}; expected one of {ANALYZERS}")
    verdicts = [classify(tid, text) for tid, text in items]
    summary: dict[str, int] = {}
    for verdict in verdicts:
        summary[verdict.class_label] = summary.get(verdict.class_label, 0) + 1
    return verdicts, summary
