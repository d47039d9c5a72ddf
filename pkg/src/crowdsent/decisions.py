"""Append-only human decision log shared by the CLI, the sampler, the
event filter and the review service.

One JSON object per line: {"kind","key","verdict","source"}. The latest
line for a (kind, key) pair wins, so corrections are plain appends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError

DECISION_KINDS = ("label", "profile", "keyword", "sample")

VERDICTS_BY_KIND = {
    "label": ("accept", "reject"),
    "profile": ("accept", "reject"),
    "keyword": ("accept", "reject"),
    "sample": ("relevant", "irrelevant", "Negative", "Neutral", "Positive"),
}

DECISIONS_FILENAME = "decisions.jsonl"


@dataclass(frozen=True)
class Decision:
    kind: str
    key: str
    verdict: str
    source: str = "human"

    def __post_init__(self):
        if self.kind not in DECISION_KINDS:
            raise ValueError(f"unknown decision kind {self.kind!r}")
        if self.verdict not in VERDICTS_BY_KIND[self.kind]:
            raise ValueError(
                f"invalid verdict {self.verdict!r} for kind {self.kind!r}"
            )

    def to_json(self) -> dict:
        return {"kind": self.kind, "key": self.key, "verdict": self.verdict, "source": self.source}


class DecisionLog:
    def __init__(self, decisions: dict[tuple[str, str], Decision] | None = None):
        self._decisions = dict(decisions or {})

    @classmethod
    def load(cls, path: str | Path) -> "DecisionLog":
        path = Path(path)
        log = cls()
        if not path.exists():
            return log
        for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                decision = Decision(
                    kind=obj["kind"],
                    key=str(obj["key"]),
                    verdict=obj["verdict"],
                    source=obj.get("source", "human"),
                )
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(path, line_no, f"bad decision record: {exc}") from exc
            log._decisions[(decision.kind, decision.key)] = decision
        return log

    def get(self, kind: str, key: str) -> Decision | None:
        return self._decisions.get((kind, key))

    def verdicts(self, kind: str) -> dict[str, str]:
        """key -> verdict for one kind."""
        return {
            key: decision.verdict
            for (k, key), decision in self._decisions.items()
            if k == kind
        }

    def record(self, decision: Decision) -> None:
        self._decisions[(decision.kind, decision.key)] = decision

    def __len__(self) -> int:
        return len(self._decisions)


def append_decision(path: str | Path, decision: Decision) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(decision.to_json(), ensure_ascii=False) + "\n")
