"""Tweet text clean-up: markup stripping, slang expansion, lemmatization.

Emoticons must survive every step — the emoticon-first analyzer depends on
them. Slang expansion and lemmatization therefore only ever touch tokens
made purely of letters/digits; anything with punctuation passes through.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError

URL_RE = re.compile(r"\b(?:https?://|www\.)\S+\b")
MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")

STEP_NAMES = ("strip_markup", "expand_slang", "lemmatize")


@dataclass(frozen=True)
class NormalizationConfig:
    acronyms: dict[str, str] = field(default_factory=dict)  # casefolded key -> expansion
    known_words: frozenset[str] = frozenset()
    lemma_exceptions: dict[str, str] = field(default_factory=dict)  # casefolded form -> lemma
    steps: tuple[str, ...] = STEP_NAMES

    def __post_init__(self):
        for step in self.steps:
            if step not in STEP_NAMES:
                raise ValueError(f"unknown normalization step {step!r}")


def load_acronyms(path: str | Path) -> dict[str, str]:
    """Read ABBR<TAB>expansion pairs; keys casefolded, duplicates rejected."""
    table: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip():
            raise ParseError(path, line_no, "expected ABBR<TAB>expansion")
        key = parts[0].strip().casefold()
        if key in table:
            raise ParseError(path, line_no, f"duplicate acronym key {key!r}")
        table[key] = parts[1].strip()
    return table


def load_known_words(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.casefold())
    return frozenset(words)


def load_lemma_exceptions(path: str | Path) -> dict[str, str]:
    table: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(path, line_no, "expected form<TAB>lemma")
        table[parts[0].strip().casefold()] = parts[1].strip()
    return table


def strip_markup(text: str) -> str:
    """Remove URLs and @mentions, unwrap hashtags, squeeze whitespace.

    Hash removal runs before mention removal so forms like "@#user" cannot
    leave a live mention behind; URLs go first so fragments keep their '#'.
    """
    text = URL_RE.sub("", text)
    text = text.replace("#", "")
    text = MENTION_RE.sub("", text)
    return _WS_RE.sub(" ", text).strip()


def _is_wordlike(token: str) -> bool:
    return bool(token) and all(ch.isalpha() or ch.isdigit() for ch in token)


def expand_slang(text: str, config: NormalizationConfig) -> str:
    """Replace out-of-vocabulary acronyms/slang with their dictionary form."""
    out = []
    for token in text.split(" "):
        if _is_wordlike(token):
            folded = token.casefold()
            if folded not in config.known_words and folded in config.acronyms:
                token = config.acronyms[folded]
        out.append(token)
    return " ".join(out)


def _undouble(stem: str, known: frozenset[str]) -> str:
    # repair consonant doubling from -ing/-ed ("running" -> "run"), but keep
    # legitimate doubles the dictionary knows ("falling" -> "fall")
    if len(stem) >= 2 and stem[-1].casefold() == stem[-2].casefold():
        last = stem[-1].casefold()
        if last.isalpha() and last not in "aeiou":
            if stem[:-1].casefold() in known or stem.casefold() not in known:
                return stem[:-1]
    return stem


def _apply_suffix_rules(token: str, known: frozenset[str]) -> str:
    folded = token.casefold()
    if folded.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if folded.endswith("sses"):
        return token[:-2]
    if folded.endswith("s") and not folded.endswith("ss") and len(token) > 3:
        return token[:-1]
    for suffix in ("ing", "ed"):
        if folded.endswith(suffix) and len(token) - len(suffix) >= 2:
            return _undouble(token[: -len(suffix)], known)
    return token


def lemmatize(text: str, config: NormalizationConfig) -> str:
    """Reduce known inflected words to their root form."""
    out = []
    for token in text.split(" "):
        if token.isalpha() and token.casefold() in config.known_words:
            exception = config.lemma_exceptions.get(token.casefold())
            if exception is not None:
                token = exception
            else:
                token = _apply_suffix_rules(token, config.known_words)
        out.append(token)
    return " ".join(out)


@dataclass(frozen=True)
class StepLog:
    step: str
    before: str
    after: str


@dataclass(frozen=True)
class NormalizedTweet:
    tweet_id: str
    original: str
    normalized: str
    steps: tuple[StepLog, ...]

    def to_json(self) -> dict:
        return {
            "tweet_id": self.tweet_id,
            "original": self.original,
            "normalized": self.normalized,
            "steps": [
                {"step": s.step, "before": s.before, "after": s.after} for s in self.steps
            ],
        }


_STEP_FUNCS = {
    "strip_markup": lambda text, config: strip_markup(text),
    "expand_slang": expand_slang,
    "lemmatize": lemmatize,
}


def normalize_text(text: str, config: NormalizationConfig) -> tuple[str, tuple[StepLog, ...]]:
    logs = []
    for step in config.steps:
        after = _STEP_FUNCS[step](text, config)
        logs.append(StepLog(step=step, before=text, after=after))
        text = after
    return text, tuple(logs)


def normalize(tweet, config: NormalizationConfig) -> NormalizedTweet:
    """Normalize one tweet (anything with .id and .text) through the configured steps."""
    normalized, logs = normalize_text(tweet.text, config)
    return NormalizedTweet(
        tweet_id=tweet.id, original=tweet.text, normalized=normalized, steps=logs
    )
