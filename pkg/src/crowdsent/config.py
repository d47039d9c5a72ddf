"""Pipeline configuration: one declarative JSON file drives every stage.

Relative paths resolve against the config file's directory. Normalization
and lexicon entries may be left empty ({}) to use the shipped defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import UsageError
from .gateway import Credential, DEFAULT_PAGE_LIMIT, DEFAULT_TIMELINE_CAP
from .lexicons import data_path
from .snowball import ProfileFilter, SnowballConfig

REQUIRED_KEYS = (
    "seed",
    "output_dir",
    "corpus",
    "gateway",
    "snowball",
    "events",
    "normalization",
    "lexicons",
)


@dataclass(frozen=True)
class GatewaySettings:
    backend: str  # "fixture" | "http"
    base_url: str | None
    credentials: tuple[Credential, ...]
    page_limit: int = DEFAULT_PAGE_LIMIT
    timeline_cap: int = DEFAULT_TIMELINE_CAP
    blocking: bool = True
    max_retries: int = 2

    def __post_init__(self):
        if self.backend not in ("fixture", "http"):
            raise UsageError(f"unknown gateway backend {self.backend!r}")
        if self.backend == "http" and not self.base_url:
            raise UsageError("http backend requires base_url")
        if not self.credentials:
            raise UsageError("at least one credential is required")


@dataclass(frozen=True)
class EvaluationSettings:
    enabled: bool = False
    relevance_sample_size: int = 30
    recall_sample_size: int = 50
    sentiment_sample_size: int = 30


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    output_dir: Path
    users_path: Path
    lists_path: Path
    tweets_path: Path
    gateway: GatewaySettings
    snowball: SnowballConfig
    events_path: Path
    acronyms_path: Path
    known_words_path: Path
    lemma_exceptions_path: Path
    normalize_steps: tuple[str, ...]
    valence_path: Path
    negators_path: Path
    intensifiers_path: Path
    emotions_path: Path
    emoticons_path: Path
    stopwords_path: Path
    evaluation: EvaluationSettings = EvaluationSettings()
    top_contributors: int = 10

    @property
    def decisions_path(self) -> Path:
        return self.output_dir / "decisions.jsonl"

    def artifact(self, name: str) -> Path:
        return self.output_dir / name


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else (base / path)


def _existing(base: Path, value: str, what: str) -> Path:
    path = _resolve(base, value)
    if not path.exists():
        raise UsageError(f"{what} does not exist: {path}")
    return path


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    missing = [key for key in REQUIRED_KEYS if key not in raw]
    if missing:
        raise UsageError(f"config {path}: missing required keys: {', '.join(missing)}")
    base = path.parent

    corpus = raw["corpus"]
    for key in ("users", "lists", "tweets"):
        if key not in corpus:
            raise UsageError(f"config {path}: corpus.{key} is required")

    gw = raw["gateway"]
    credentials = tuple(
        Credential(
            key_id=str(c["key_id"]),
            window=float(c.get("window_seconds", 900.0)),
            budget=int(c.get("budget", 15)),
        )
        for c in gw.get("credentials", [])
    )
    gateway = GatewaySettings(
        backend=gw.get("backend", "fixture"),
        base_url=gw.get("base_url"),
        credentials=credentials,
        page_limit=int(gw.get("page_limit", DEFAULT_PAGE_LIMIT)),
        timeline_cap=int(gw.get("timeline_cap", DEFAULT_TIMELINE_CAP)),
        blocking=bool(gw.get("blocking", True)),
        max_retries=int(gw.get("max_retries", 2)),
    )

    sb = raw["snowball"]
    profile_filter = None
    if sb.get("profile_filter"):
        pf = sb["profile_filter"]
        profile_filter = ProfileFilter(
            location_keywords=frozenset(pf.get("location_keywords", [])),
            description_keywords=frozenset(pf.get("description_keywords", [])),
        )
    snowball = SnowballConfig(
        seed_user_ids=frozenset(str(u) for u in sb.get("seed_user_ids", [])),
        label_keywords=frozenset(str(k) for k in sb.get("label_keywords", [])),
        max_rounds=int(sb.get("max_rounds", 3)),
        target_size=int(sb.get("target_size", 1_000_000)),
        profile_filter=profile_filter,
        pending_policy=sb.get("pending_policy", "halt"),
    )

    norm = raw["normalization"]
    lex = raw["lexicons"]
    ev = raw.get("evaluation", {})
    evaluation = EvaluationSettings(
        enabled=bool(ev.get("enabled", False)),
        relevance_sample_size=int(ev.get("relevance_sample_size", 30)),
        recall_sample_size=int(ev.get("recall_sample_size", 50)),
        sentiment_sample_size=int(ev.get("sentiment_sample_size", 30)),
    )

    def norm_path(key: str, default_name: str) -> Path:
        if key in norm:
            return _existing(base, norm[key], f"normalization.{key}")
        return data_path(default_name)

    def lex_path(key: str, default_name: str) -> Path:
        if key in lex:
            return _existing(base, lex[key], f"lexicons.{key}")
        return data_path(default_name)

    return PipelineConfig(
        seed=int(raw["seed"]),
        output_dir=_resolve(base, raw["output_dir"]),
        users_path=_existing(base, corpus["users"], "corpus.users"),
        lists_path=_existing(base, corpus["lists"], "corpus.lists"),
        tweets_path=_existing(base, corpus["tweets"], "corpus.tweets"),
        gateway=gateway,
        snowball=snowball,
        events_path=_existing(base, raw["events"], "events file"),
        acronyms_path=norm_path("acronyms", "acronyms.tsv"),
        known_words_path=norm_path("known_words", "known_words.txt"),
        lemma_exceptions_path=norm_path("lemma_exceptions", "lemma_exceptions.tsv"),
        normalize_steps=tuple(norm.get("steps", ("strip_markup", "expand_slang", "lemmatize"))),
        valence_path=lex_path("valence", "valence.tsv"),
        negators_path=lex_path("negators", "negators.txt"),
        intensifiers_path=lex_path("intensifiers", "intensifiers.tsv"),
        emotions_path=lex_path("emotions", "emotions.tsv"),
        emoticons_path=lex_path("emoticons", "emoticons.tsv"),
        stopwords_path=(
            _existing(base, raw["stopwords"], "stopwords") if raw.get("stopwords")
            else data_path("stopwords.txt")
        ),
        evaluation=evaluation,
        top_contributors=int(raw.get("top_contributors", 10)),
    )
