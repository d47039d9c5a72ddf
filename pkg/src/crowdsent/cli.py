"""The `pipeline` command: stage execution, review round-trips, reports.

Exit codes: 0 success, 2 missing input, 3 pending human decisions,
4 validation error (bad config, bad data file, bad review file).
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click
from filelock import FileLock, Timeout

from . import stages
from .config import PipelineConfig, load_config
from .decisions import Decision, VERDICTS_BY_KIND, append_decision
from .errors import (
    CrowdsentError,
    MissingInputError,
    ParseError,
    PendingDecisionsError,
    UsageError,
)
from .ioutils import read_json

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISSING_INPUT = 2
EXIT_PENDING = 3
EXIT_VALIDATION = 4

_REVIEW_KIND_TO_DECISION = {"labels": "label", "keywords": "keyword", "sample": "sample"}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(config_path: str) -> PipelineConfig:
    try:
        return load_config(config_path)
    except CrowdsentError as exc:
        _fail(EXIT_VALIDATION, str(exc))


def _locked(config: PipelineConfig):
    config.output_dir.mkdir(parents=True, exist_ok=True)
    return FileLock(str(config.output_dir / ".pipeline.lock"), timeout=0.1)


def _run_stages(config: PipelineConfig, names: list[str]) -> None:
    try:
        with _locked(config):
            for name in names:
                artifact = getattr(stages, f"stage_{name}")(config)
                click.echo(f"{name}: wrote {artifact}")
    except Timeout:
        _fail(EXIT_VALIDATION, "another pipeline run holds the output directory lock")
    except PendingDecisionsError as exc:
        click.echo(f"pending decisions; review file: {exc.review_path}", err=True)
        sys.exit(EXIT_PENDING)
    except MissingInputError as exc:
        _fail(EXIT_MISSING_INPUT, str(exc))
    except (ParseError, UsageError) as exc:
        _fail(EXIT_VALIDATION, str(exc))


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable info logging.")
def main(verbose: bool):
    """Community sentiment pipeline."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _stage_command(name: str):
    @main.command(name=name, help=f"Run the {name} stage.")
    @click.option("--config", "config_path", required=True, type=click.Path(exists=True))
    def _cmd(config_path: str):
        _run_stages(_load(config_path), [name])

    return _cmd


for _name in stages.STAGES:
    if _name != "report":
        _stage_command(_name)


@main.command(name="report")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def report_cmd(config_path: str, fmt: str):
    """Run the report stage; --format csv prints the CSV table paths."""
    config = _load(config_path)
    _run_stages(config, ["report"])
    if fmt == "csv":
        for name in (
            "report_participation.csv",
            "report_distribution.csv",
            "report_relevance.csv",
            "report_analyzer_precision.csv",
        ):
            click.echo(str(config.artifact(name)))


@main.command(name="run")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def run_all(config_path: str):
    """Run every stage from ingest through report."""
    _run_stages(_load(config_path), list(stages.STAGES))


@main.group()
def review():
    """Export pending decisions for human review, import the results."""


@review.command(name="export")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--kind", required=True, type=click.Choice(stages.REVIEW_KINDS))
@click.option("--file", "out_path", required=True, type=click.Path())
def review_export(config_path: str, kind: str, out_path: str):
    config = _load(config_path)
    try:
        path = stages.export_review(config, kind, Path(out_path))
    except MissingInputError as exc:
        _fail(EXIT_MISSING_INPUT, str(exc))
    entries = read_json(path)
    pending = sum(1 for e in entries if e["verdict"] == "pending")
    click.echo(f"exported {pending} pending {kind} item(s) to {path}")


@review.command(name="import")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--kind", required=True, type=click.Choice(stages.REVIEW_KINDS))
@click.option("--file", "in_path", required=True, type=click.Path(exists=True))
def review_import(config_path: str, kind: str, in_path: str):
    """Merge a filled-in review file into the decision log.

    Entries still marked pending are skipped; any invalid verdict aborts the
    whole import."""
    config = _load(config_path)
    decision_kind = _REVIEW_KIND_TO_DECISION[kind]
    try:
        entries = read_json(in_path)
    except ValueError as exc:
        _fail(EXIT_VALIDATION, f"unreadable review file {in_path}: {exc}")
    if not isinstance(entries, list):
        _fail(EXIT_VALIDATION, f"{in_path}: expected a JSON array of review entries")

    decisions = []
    problems = []
    for index, entry in enumerate(entries, start=1):
        verdict = entry.get("verdict")
        if verdict == "pending":
            continue
        key = entry.get("key")
        if not key or entry.get("kind") not in (decision_kind, None):
            problems.append(f"entry {index}: bad kind/key")
            continue
        if verdict not in VERDICTS_BY_KIND[decision_kind]:
            problems.append(f"entry {index}: invalid verdict {verdict!r}")
            continue
        decisions.append(Decision(kind=decision_kind, key=key, verdict=verdict, source="human"))
    if problems:
        _fail(EXIT_VALIDATION, "nothing merged; " + "; ".join(problems))

    counts = {"accept": 0, "reject": 0, "other": 0}
    for decision in decisions:
        append_decision(config.decisions_path, decision)
        counts[decision.verdict if decision.verdict in counts else "other"] += 1
    click.echo(
        f"merged {len(decisions)} decision(s) "
        f"(accept={counts['accept']}, reject={counts['reject']}, labels={counts['other']})"
    )


@main.command(name="serve")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8400, show_default=True, type=int)
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="Static UI directory (default: ./frontend/dist when present).")
def serve(config_path: str, host: str, port: int, ui_dir: str | None):
    """Run the review HTTP service over the pipeline output directory."""
    import uvicorn

    from .service import create_app

    config = _load(config_path)
    ui = Path(ui_dir) if ui_dir else Path("frontend/dist")
    app = create_app(config.output_dir, ui_dir=ui if ui.is_dir() else None)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
