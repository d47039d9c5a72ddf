"""Lexicon files backing the two sentiment engines.

All lexicons are small TSV/text files so they can be swapped per deployment;
the shipped defaults live in crowdsent/data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError

EKMAN_EMOTIONS = ("anger", "disgust", "fear", "happiness", "sadness", "surprise")

# happiness reads positive, surprise carries no commitment, the rest negative
DEFAULT_EMOTION_VALENCE = {
    "happiness": 1,
    "sadness": -1,
    "anger": -1,
    "fear": -1,
    "disgust": -1,
    "surprise": 0,
}


@dataclass(frozen=True)
class LexiconBundle:
    valence: dict[str, float]  # word -> score in [-2, +2]
    negators: frozenset[str]
    intensifiers: dict[str, float]  # word -> multiplier > 0
    emotions: dict[str, tuple[str, float]]  # word -> (ekman emotion, weight)
    emoticons: dict[str, tuple[int, str]]  # literal -> (polarity, emotion)
    emotion_valence: dict[str, int] = field(
        default_factory=lambda: dict(DEFAULT_EMOTION_VALENCE)
    )

    def __post_init__(self):
        for word, score in self.valence.items():
            if not -2.0 <= score <= 2.0:
                raise ValueError(f"valence score out of range for {word!r}: {score}")
        for word, mult in self.intensifiers.items():
            if mult <= 0:
                raise ValueError(f"intensifier multiplier must be > 0 for {word!r}")
        for word, (emotion, weight) in self.emotions.items():
            if emotion not in EKMAN_EMOTIONS:
                raise ValueError(f"unknown emotion {emotion!r} for {word!r}")
            if weight < 0:
                raise ValueError(f"emotion weight must be >= 0 for {word!r}")
        for literal, (polarity, emotion) in self.emoticons.items():
            if polarity not in (-1, 0, 1):
                raise ValueError(f"emoticon polarity must be -1/0/+1 for {literal!r}")
            if emotion not in EKMAN_EMOTIONS:
                raise ValueError(f"unknown emotion {emotion!r} for emoticon {literal!r}")
            if literal.isalnum():
                # a purely alphanumeric literal would collide with ordinary words
                raise ValueError(f"emoticon literal {literal!r} must contain punctuation")


def _rows(path: str | Path, n_cols: int):
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != n_cols:
            raise ParseError(path, line_no, f"expected {n_cols} tab-separated columns")
        yield line_no, [p.strip() for p in parts]


def _unique_insert(table: dict, key: str, value, path, line_no):
    if key in table:
        raise ParseError(path, line_no, f"duplicate key {key!r}")
    table[key] = value


def load_valence(path: str | Path) -> dict[str, float]:
    table: dict[str, float] = {}
    for line_no, (word, score) in _rows(path, 2):
        _unique_insert(table, word.casefold(), float(score), path, line_no)
    return table


def load_negators(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.casefold())
    return frozenset(words)


def load_intensifiers(path: str | Path) -> dict[str, float]:
    table: dict[str, float] = {}
    for line_no, (word, mult) in _rows(path, 2):
        _unique_insert(table, word.casefold(), float(mult), path, line_no)
    return table


def load_emotions(path: str | Path) -> dict[str, tuple[str, float]]:
    table: dict[str, tuple[str, float]] = {}
    for line_no, (word, emotion, weight) in _rows(path, 3):
        _unique_insert(table, word.casefold(), (emotion.casefold(), float(weight)), path, line_no)
    return table


def load_emoticons(path: str | Path) -> dict[str, tuple[int, str]]:
    table: dict[str, tuple[int, str]] = {}
    for line_no, (literal, polarity, emotion) in _rows(path, 3):
        _unique_insert(table, literal.casefold(), (int(polarity), emotion.casefold()), path, line_no)
    return table


def load_bundle(
    valence_path: str | Path,
    negators_path: str | Path,
    intensifiers_path: str | Path,
    emotions_path: str | Path,
    emoticons_path: str | Path,
    emotion_valence: dict[str, int] | None = None,
) -> LexiconBundle:
    kwargs = {}
    if emotion_valence is not None:
        kwargs["emotion_valence"] = dict(emotion_valence)
    return LexiconBundle(
        valence=load_valence(valence_path),
        negators=load_negators(negators_path),
        intensifiers=load_intensifiers(intensifiers_path),
        emotions=load_emotions(emotions_path),
        emoticons=load_emoticons(emoticons_path),
        **kwargs,
    )


def data_path(name: str) -> Path:
    """Path of a shipped default data file."""
    return Path(resources.files("crowdsent").joinpath("data", name))


def load_default_bundle() -> LexiconBundle:
    return load_bundle(
        data_path("valence.tsv"),
        data_path("negators.txt"),
        data_path("intensifiers.tsv"),
        data_path("emotions.tsv"),
        data_path("emoticons.tsv"),
    )
