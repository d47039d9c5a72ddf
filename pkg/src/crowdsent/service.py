"""Local review service: pending decisions over HTTP plus read-only reports.

The service is the UI's backend. It derives pending items from pipeline
artifacts on every request and appends decisions to the same decisions.jsonl
the CLI consumes, so either front door sees the other's work immediately.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .decisions import Decision, DecisionLog, VERDICTS_BY_KIND, append_decision
from .ioutils import read_json, read_jsonl

PAGE_SIZE = 50

KIND_BY_QUERY = {
    "labels": "label",
    "profiles": "profile",
    "keywords": "keyword",
    "samples": "sample",
}

REPORT_WHITELIST = ("report.json", "evaluation.json", "community.json")


class DecisionIn(BaseModel):
    id: str
    verdict: str
    version: int | None = None


def _envelope(kind: str, key: str, payload: dict, verdict: str, version: int) -> dict:
    return {
        "id": f"{kind}:{key}",
        "kind": kind,
        "key": key,
        "payload": payload,
        "verdict": verdict,
        "version": version,
    }


class ReviewState:
    """Pending-item index over one pipeline output directory."""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.decisions_path = self.output_dir / "decisions.jsonl"
        self._write_lock = threading.Lock()

    def _decisions(self) -> DecisionLog:
        return DecisionLog.load(self.decisions_path)

    def _artifact(self, name: str):
        path = self.output_dir / name
        return path if path.exists() else None

    # -- item enumeration (pending plus decided, stable order) ---------------

    def items(self, kind: str) -> list[dict]:
        decided = self._decisions().verdicts(kind)
        if kind == "label":
            rows = self._label_items(decided)
        elif kind == "profile":
            rows = self._profile_items(decided)
        elif kind == "keyword":
            rows = self._keyword_items(decided)
        else:
            rows = self._sample_items(decided)
        return sorted(rows, key=lambda e: e["key"])

    def _label_items(self, decided: dict[str, str]) -> list[dict]:
        path = self._artifact("community.json")
        if path is None:
            return []
        community = read_json(path)
        context = community.get("pending_label_context", {})
        items = []
        for label in community.get("pending_labels", []):
            verdict = decided.get(label, "pending")
            items.append(
                _envelope("label", label, {"lists": context.get(label, 0)}, verdict,
                          0 if verdict == "pending" else 1)
            )
        return items

    def _profile_items(self, decided: dict[str, str]) -> list[dict]:
        path = self._artifact("community.json")
        if path is None:
            return []
        community = read_json(path)
        profiles = community.get("rejected_profiles", {})
        items = []
        for entry in community.get("rejected", []):
            user_id = entry["id"]
            verdict = decided.get(user_id, "pending")
            payload = {"reason": entry["reason"], **profiles.get(user_id, {})}
            items.append(
                _envelope("profile", user_id, payload, verdict,
                          0 if verdict == "pending" else 1)
            )
        return items

    def _keyword_items(self, decided: dict[str, str]) -> list[dict]:
        path = self._artifact("keywords.pending.json")
        if path is None:
            return []
        items = []
        for row in read_json(path):
            key = f"{row['event']}:{row['token']}"
            verdict = decided.get(key, "pending")
            items.append(
                _envelope("keyword", key,
                          {"token": row["token"], "count": row["count"], "event": row["event"]},
                          verdict, 0 if verdict == "pending" else 1)
            )
        return items

    def _sample_items(self, decided: dict[str, str]) -> list[dict]:
        path = self._artifact("samples.jsonl")
        if path is None:
            return []
        texts = self._tweet_texts()
        normalized = self._normalized_texts()
        items = []
        for row in read_jsonl(path):
            key = f"{row['task_id']}/{row['tweet_id']}"
            verdict = row["label"] or decided.get(key, "pending")
            payload = {
                "task_id": row["task_id"],
                "task_kind": row["kind"],
                "tweet_id": row["tweet_id"],
                "text": texts.get(row["tweet_id"]),
                "normalized": normalized.get(row["tweet_id"]),
            }
            items.append(
                _envelope("sample", key, payload, verdict, 0 if verdict == "pending" else 1)
            )
        return items

    def _tweet_texts(self) -> dict[str, str]:
        path = self._artifact("timelines.jsonl")
        if path is None:
            return {}
        return {row["id"]: row["text"] for row in read_jsonl(path)}

    def _normalized_texts(self) -> dict[str, str]:
        path = self._artifact("normalized.jsonl")
        if path is None:
            return {}
        return {row["tweet_id"]: row["normalized"] for row in read_jsonl(path)}

    # -- decision writing -----------------------------------------------------

    def decide(self, envelope_id: str, verdict: str, version: int | None) -> dict:
        if ":" not in envelope_id:
            raise HTTPException(status_code=404, detail="unknown envelope id")
        kind, key = envelope_id.split(":", 1)
        if kind not in VERDICTS_BY_KIND:
            raise HTTPException(status_code=404, detail=f"unknown kind {kind!r}")
        if verdict not in VERDICTS_BY_KIND[kind]:
            raise HTTPException(
                status_code=400,
                detail=f"invalid verdict {verdict!r} for kind {kind!r}",
            )
        with self._write_lock:
            known = {item["key"]: item for item in self.items(kind)}
            item = known.get(key)
            if item is None:
                raise HTTPException(status_code=404, detail=f"no reviewable item {envelope_id}")
            if version is not None and version != item["version"]:
                raise HTTPException(status_code=409, detail="stale envelope version")
            if item["verdict"] != "pending":
                if item["verdict"] == verdict:
                    return item  # idempotent repeat
                raise HTTPException(status_code=409, detail="conflicting re-decision")
            append_decision(
                self.decisions_path, Decision(kind=kind, key=key, verdict=verdict)
            )
            item["verdict"] = verdict
            item["version"] += 1
            return item


def create_app(output_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    state = ReviewState(Path(output_dir))
    app = FastAPI(title="crowdsent review service")

    @app.get("/api/pending")
    def pending(kind: str, page: int = 1, page_size: int = PAGE_SIZE, all: bool = False):
        if kind not in KIND_BY_QUERY:
            raise HTTPException(status_code=400, detail=f"unknown kind {kind!r}")
        items = state.items(KIND_BY_QUERY[kind])
        if not all:
            items = [item for item in items if item["verdict"] == "pending"]
        total = len(items)
        start = (page - 1) * page_size
        return {
            "kind": kind,
            "page": page,
            "page_size": page_size,
            "total": total,
            "items": items[start : start + page_size],
        }

    @app.post("/api/decision")
    def decision(body: DecisionIn):
        return state.decide(body.id, body.verdict, body.version)

    @app.get("/api/reports/{name}")
    def report(name: str):
        safe = name in REPORT_WHITELIST or (
            name.startswith("report_") and name.endswith(".csv")
        )
        path = state.output_dir / name
        if not safe or not path.exists():
            raise HTTPException(status_code=404, detail=f"no report {name!r}")
        media = "application/json" if name.endswith(".json") else "text/csv"
        return Response(content=path.read_bytes(), media_type=media)

    if ui_dir is not None and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
