"""Pipeline stage implementations.

Each stage reads the previous stage's artifacts from the output directory,
writes its own atomically, and is idempotent for identical inputs. The CLI
in crowdsent.cli is a thin wrapper mapping errors to exit codes.
"""

from __future__ import annotations

import csv
import io
import logging
from collections import defaultdict
from pathlib import Path

from . import metrics, snowball
from .config import PipelineConfig
from .corpus import CorpusStore, Tweet, load_corpus
from .decisions import DecisionLog
from .errors import AccessDeniedError, MissingInputError, PendingDecisionsError
from .events import (
    KeywordSet,
    expand_and_rematch,
    load_events,
    load_stopwords,
    propose_keywords,
)
from .gateway import FixtureBackend, HttpBackend, SourceGateway
from .ioutils import (
    read_json,
    read_jsonl,
    write_json_atomic,
    write_jsonl_atomic,
    write_text_atomic,
)
from .lexicons import load_bundle
from .normalize import (
    NormalizationConfig,
    load_acronyms,
    load_known_words,
    load_lemma_exceptions,
    normalize,
)
from .sentiment import ANALYZER_EMOTICON, ANALYZER_FINE, classify_event

log = logging.getLogger(__name__)

STAGES = ("ingest", "snowball", "fetch", "events", "normalize", "classify", "evaluate", "report")

ARTIFACTS = {
    "ingest": "manifest.json",
    "snowball": "community.json",
    "fetch": "timelines.jsonl",
    "events": "event_matches.json",
    "normalize": "normalized.jsonl",
    "classify": "verdicts.jsonl",
    "evaluate": "evaluation.json",
    "report": "report.json",
}


def _require(config: PipelineConfig, artifact: str) -> Path:
    path = config.artifact(artifact)
    if not path.exists():
        raise MissingInputError(artifact, path)
    return path


def _load_store(config: PipelineConfig) -> CorpusStore:
    return load_corpus(config.users_path, config.lists_path, config.tweets_path)


def _make_gateway(config: PipelineConfig, store: CorpusStore | None = None) -> SourceGateway:
    settings = config.gateway
    if settings.backend == "http":
        backend = HttpBackend(settings.base_url)
    else:
        backend = FixtureBackend(store if store is not None else _load_store(config))
    return SourceGateway(
        backend,
        settings.credentials,
        page_limit=settings.page_limit,
        blocking=settings.blocking,
        max_retries=settings.max_retries,
    )


def _decisions(config: PipelineConfig) -> DecisionLog:
    return DecisionLog.load(config.decisions_path)


def _normalization_config(config: PipelineConfig) -> NormalizationConfig:
    return NormalizationConfig(
        acronyms=load_acronyms(config.acronyms_path),
        known_words=load_known_words(config.known_words_path),
        lemma_exceptions=load_lemma_exceptions(config.lemma_exceptions_path),
        steps=config.normalize_steps,
    )


def _lexicon_bundle(config: PipelineConfig):
    return load_bundle(
        config.valence_path,
        config.negators_path,
        config.intensifiers_path,
        config.emotions_path,
        config.emoticons_path,
    )


# -- stages ------------------------------------------------------------------


def stage_ingest(config: PipelineConfig) -> Path:
    store = _load_store(config)
    manifest = {
        "seed": config.seed,
        "counts": {
            "users": len(store.users),
            "lists": len(store.lists),
            "tweets": len(store.tweets),
        },
        "sources": {
            "users": str(config.users_path),
            "lists": str(config.lists_path),
            "tweets": str(config.tweets_path),
        },
    }
    return write_json_atomic(config.artifact("manifest.json"), manifest)


def stage_snowball(config: PipelineConfig) -> Path:
    _require(config, "manifest.json")
    decisions = _decisions(config)
    gateway = _make_gateway(config)
    community = snowball.run(
        config.snowball,
        gateway,
        label_decisions=decisions.verdicts("label"),
        profile_decisions=decisions.verdicts("profile"),
    )
    obj = community.to_json()
    obj["seed"] = config.seed
    out = write_json_atomic(config.artifact("community.json"), obj)
    if community.stop_reason == snowball.STOP_PENDING:
        review = export_review(config, "labels", config.artifact("labels.pending.json"))
        raise PendingDecisionsError(review, community.pending_labels)
    return out


def stage_fetch(config: PipelineConfig) -> Path:
    community = read_json(_require(config, "community.json"))
    store = _load_store(config) if config.gateway.backend == "fixture" else None
    gateway = _make_gateway(config, store)
    rows = []
    for member in community["members"]:
        user_id = member["id"]
        try:
            timeline = gateway.fetch_timeline(user_id, cap=config.gateway.timeline_cap)
        except AccessDeniedError:
            log.info("skipping protected user %s", user_id)
            continue
        rows.extend(tweet.to_json() for tweet in timeline)
    rows.sort(key=lambda r: (r["created_at"], r["id"]))
    return write_jsonl_atomic(config.artifact("timelines.jsonl"), rows)


def _community_tweets(config: PipelineConfig) -> list[Tweet]:
    return [Tweet.from_json(obj) for obj in read_jsonl(_require(config, "timelines.jsonl"))]


def stage_events(config: PipelineConfig) -> Path:
    tweets = _community_tweets(config)
    tweet_user = {t.id: t.user_id for t in tweets}
    specs = load_events(config.events_path)
    decisions = _decisions(config)
    keyword_verdicts = decisions.verdicts("keyword")  # keys are "<event>:<token>"

    matches = {}
    pending_rows = []
    for spec in specs:
        stopwords = load_stopwords(
            spec.expansion.stopword_file
            if spec.expansion.stopword_file
            else config.stopwords_path
        )
        keywords = KeywordSet(seeds=spec.seed_keywords)
        candidates = propose_keywords(tweets, spec, keywords, stopwords)
        prefix = f"{spec.name}:"
        approved = {
            key[len(prefix):]
            for key, verdict in keyword_verdicts.items()
            if verdict == "accept" and key.startswith(prefix)
        }
        expanded = expand_and_rematch(tweets, spec, keywords, approved)
        match = expanded.match
        matches[spec.name] = {
            "tweet_ids": list(match.tweet_ids),
            "tweet_user_map": {tid: tweet_user[tid] for tid in match.tweet_ids},
            "participants": sorted(match.participants),
            "per_user": dict(sorted(match.per_user.items())),
            "seed_only_count": expanded.seed_only_count,
            "expanded_count": expanded.expanded_count,
            "keywords": {
                "seeds": sorted(keywords.seeds),
                "approved": sorted(approved),
            },
        }
        for token, count in candidates:
            if f"{spec.name}:{token}" not in keyword_verdicts:
                pending_rows.append(
                    {"token": token, "count": count, "verdict": "pending", "event": spec.name}
                )
    write_json_atomic(config.artifact("keywords.pending.json"), pending_rows)
    return write_json_atomic(
        config.artifact("event_matches.json"), {"seed": config.seed, "events": matches}
    )


def stage_normalize(config: PipelineConfig) -> Path:
    matches = read_json(_require(config, "event_matches.json"))["events"]
    tweets = {t.id: t for t in _community_tweets(config)}
    wanted = sorted({tid for data in matches.values() for tid in data["tweet_ids"]})
    ncfg = _normalization_config(config)
    rows = [normalize(tweets[tid], ncfg).to_json() for tid in wanted if tid in tweets]
    return write_jsonl_atomic(config.artifact("normalized.jsonl"), rows)


def stage_classify(config: PipelineConfig) -> Path:
    normalized = read_jsonl(_require(config, "normalized.jsonl"))
    bundle = _lexicon_bundle(config)
    pairs = [(row["tweet_id"], row["normalized"]) for row in normalized]
    rows = []
    for analyzer in (ANALYZER_FINE, ANALYZER_EMOTICON):
        verdicts, _ = classify_event(pairs, analyzer, bundle)
        rows.extend(v.to_json() for v in verdicts)
    return write_jsonl_atomic(config.artifact("verdicts.jsonl"), rows)


def _verdict_labels(config: PipelineConfig) -> dict[str, dict[str, str]]:
    """analyzer -> tweet_id -> class label."""
    table: dict[str, dict[str, str]] = defaultdict(dict)
    for row in read_jsonl(_require(config, "verdicts.jsonl")):
        label = row["class"] if "class" in row else metrics.POLARITY_TO_LABEL[row["polarity"]]
        table[row["analyzer"]][row["tweet_id"]] = label
    return table


def stage_evaluate(config: PipelineConfig) -> Path:
    matches = read_json(_require(config, "event_matches.json"))["events"]
    verdicts = _verdict_labels(config)
    result: dict = {
        "seed": config.seed,
        "sampling_enabled": config.evaluation.enabled,
        "events": {},
    }

    if not config.evaluation.enabled:
        for name in sorted(matches):
            result["events"][name] = {"precision": None, "recall_estimate": None,
                                      "analyzer_precision": {}}
        return write_json_atomic(config.artifact("evaluation.json"), result)

    tweets = _community_tweets(config)
    decisions = _decisions(config)
    sample_verdicts = decisions.verdicts("sample")
    specs = {spec.name: spec for spec in load_events(config.events_path)}

    sample_rows = []
    pending_keys = []
    per_event_tasks: dict[str, dict[str, metrics.SampleTask]] = {}
    for name in sorted(matches):
        spec = specs[name]
        matched_ids = matches[name]["tweet_ids"]
        start, end = spec.window
        window_ids = [t.id for t in tweets if start <= t.created_at <= end]
        unmatched_ids = sorted(set(window_ids) - set(matched_ids))
        cfg = config.evaluation
        tasks = {}
        plan = [
            ("precision", "relevance", matched_ids, cfg.relevance_sample_size),
            ("recall", "relevance", unmatched_ids, cfg.recall_sample_size),
            ("sentiment", "sentiment", matched_ids, cfg.sentiment_sample_size),
        ]
        for suffix, kind, population, size in plan:
            if not population:
                continue
            task = metrics.draw_sample(
                population, size, config.seed, task_id=f"{name}:{suffix}", kind=kind,
                descriptor=f"event {name} ({suffix})",
            )
            for item in sorted(task.labels):
                label = sample_verdicts.get(f"{task.task_id}/{item}")
                if label is not None:
                    task.set_label(item, label)
                else:
                    pending_keys.append(f"{task.task_id}/{item}")
                sample_rows.append(
                    {"task_id": task.task_id, "kind": kind, "tweet_id": item,
                     "label": label, "seed": config.seed}
                )
            tasks[suffix] = task
        per_event_tasks[name] = tasks

    write_jsonl_atomic(config.artifact("samples.jsonl"), sample_rows)
    if pending_keys:
        review = export_review(config, "sample", config.artifact("samples.pending.json"))
        raise PendingDecisionsError(review, pending_keys)

    for name, tasks in per_event_tasks.items():
        entry = {"precision": None, "recall_estimate": None, "analyzer_precision": {}}
        if "precision" in tasks:
            entry["precision"] = metrics.sample_precision(tasks["precision"])
        if "recall" in tasks:
            entry["recall_estimate"] = metrics.estimate_recall_by_sampling(tasks["recall"])
        if "sentiment" in tasks:
            for analyzer, table in sorted(verdicts.items()):
                entry["analyzer_precision"][analyzer] = metrics.analyzer_precision(
                    tasks["sentiment"], table
                )
        result["events"][name] = entry
    return write_json_atomic(config.artifact("evaluation.json"), result)


def stage_report(config: PipelineConfig) -> Path:
    community = read_json(_require(config, "community.json"))
    matches = read_json(_require(config, "event_matches.json"))["events"]
    evaluation = read_json(_require(config, "evaluation.json"))
    verdicts_by_analyzer = _verdict_labels(config)
    community_size = len(community["members"])

    report: dict = {
        "seed": config.seed,
        "community": {"size": community_size, "stop_reason": community["stop_reason"]},
        "events": {},
    }
    for name in sorted(matches):
        data = matches[name]
        matched_ids = set(data["tweet_ids"])
        event_verdicts = {
            analyzer: {tid: label for tid, label in table.items() if tid in matched_ids}
            for analyzer, table in verdicts_by_analyzer.items()
        }
        distributions = {
            analyzer: metrics.distribution_from_counts(_count_labels(table))
            for analyzer, table in sorted(event_verdicts.items())
        }
        fine_by_user = _labels_by_user(data, event_verdicts.get(ANALYZER_FINE, {}))
        clusters = metrics.category_clusters_from_labels(fine_by_user)
        agreement = None
        fine = event_verdicts.get(ANALYZER_FINE, {})
        emo = event_verdicts.get(ANALYZER_EMOTICON, {})
        if fine and set(fine) == set(emo):
            agreement = metrics.analyzer_agreement(fine, emo).to_json()
        report["events"][name] = {
            "tweets": len(data["tweet_ids"]),
            "seed_only_tweets": data["seed_only_count"],
            "participants": len(data["participants"]),
            "participation": metrics.participation(
                len(data["participants"]), community_size
            ).to_json(),
            "distributions": {a: d.to_json() for a, d in distributions.items()},
            "category_clusters": clusters.to_json(),
            "top_contributors": [
                {"user_id": user, "tweets": count}
                for user, count in metrics.top_contributors(
                    data["per_user"], config.top_contributors
                )
            ],
            "agreement": agreement,
            "evaluation": evaluation["events"].get(name),
        }
    path = write_json_atomic(config.artifact("report.json"), report)
    write_report_csvs(config, report)
    return path


def _count_labels(table: dict[str, str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for label in table.values():
        counts[label] = counts.get(label, 0) + 1
    return counts


def _labels_by_user(match_data: dict, labels: dict[str, str]) -> dict[str, list[str]]:
    tweets_of: dict[str, list[str]] = defaultdict(list)
    for tid, uid in match_data["tweet_user_map"].items():
        if tid in labels:
            tweets_of[uid].append(labels[tid])
    return tweets_of


# -- report CSV mirrors -------------------------------------------------------


def write_report_csvs(config: PipelineConfig, report: dict) -> list[Path]:
    out = []
    events = report["events"]

    def emit(name: str, header: list[str], rows: list[list]) -> None:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        out.append(write_text_atomic(config.artifact(name), buffer.getvalue()))

    emit(
        "report_participation.csv",
        ["event", "tweets", "participants", "participation_pct"],
        [
            [name, ev["tweets"], ev["participants"], ev["participation"]["percentage"]]
            for name, ev in sorted(events.items())
        ],
    )
    emit(
        "report_distribution.csv",
        ["event", "analyzer", "VeryNegative", "Negative", "Neutral", "Positive", "VeryPositive"],
        [
            [name, analyzer] + [dist["counts"][c] for c in metrics.FIVE_WAY]
            for name, ev in sorted(events.items())
            for analyzer, dist in sorted(ev["distributions"].items())
        ],
    )
    emit(
        "report_relevance.csv",
        ["event", "precision", "recall_estimate"],
        [
            [
                name,
                _fmt(ev["evaluation"]["precision"]) if ev["evaluation"] else "",
                _fmt(ev["evaluation"]["recall_estimate"]) if ev["evaluation"] else "",
            ]
            for name, ev in sorted(events.items())
        ],
    )
    emit(
        "report_analyzer_precision.csv",
        ["event", "analyzer", "precision"],
        [
            [name, analyzer, _fmt(value)]
            for name, ev in sorted(events.items())
            if ev["evaluation"]
            for analyzer, value in sorted(ev["evaluation"]["analyzer_precision"].items())
        ],
    )
    return out


def _fmt(value) -> str:
    return "" if value is None else f"{value:.2f}"


# -- review round-trips -------------------------------------------------------


REVIEW_KINDS = ("labels", "keywords", "sample")


def export_review(config: PipelineConfig, kind: str, out_path: Path) -> Path:
    """Write pending items of one kind as an editable review file."""
    entries = []
    if kind == "labels":
        community_path = _require(config, "community.json")
        community = read_json(community_path)
        decided = _decisions(config).verdicts("label")
        for label in community.get("pending_labels", []):
            if label not in decided:
                entries.append({"kind": "label", "key": label, "verdict": "pending"})
    elif kind == "keywords":
        pending = read_json(_require(config, "keywords.pending.json"))
        decided = _decisions(config).verdicts("keyword")
        for row in pending:
            key = f"{row['event']}:{row['token']}"
            if key not in decided:
                entries.append(
                    {"kind": "keyword", "key": key, "verdict": "pending",
                     "context": {"count": row["count"], "event": row["event"]}}
                )
    elif kind == "sample":
        rows = read_jsonl(_require(config, "samples.jsonl"))
        decided = _decisions(config).verdicts("sample")
        for row in rows:
            key = f"{row['task_id']}/{row['tweet_id']}"
            if row["label"] is None and key not in decided:
                entries.append(
                    {"kind": "sample", "key": key, "verdict": "pending",
                     "context": {"kind": row["kind"]}}
                )
    else:
        raise MissingInputError(f"unknown review kind {kind!r}")
    write_json_atomic(out_path, entries)
    return out_path
