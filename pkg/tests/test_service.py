import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from crowdsent.cli import main
from crowdsent.ioutils import read_json, read_jsonl
from crowdsent.service import create_app

from test_cli import run_cli, write_config


@pytest.fixture
def halted_pipeline(tmp_path, e2e_dir):
    """Pipeline stopped at snowball with pending labels."""
    runner = CliRunner()
    config = write_config(tmp_path, e2e_dir)
    run_cli(runner, "ingest", "--config", str(config))
    run_cli(runner, "snowball", "--config", str(config))
    return config, tmp_path / "out"


@pytest.fixture
def client(halted_pipeline):
    _, out = halted_pipeline
    return TestClient(create_app(out))


class TestPendingEndpoint:
    def test_unknown_kind_400(self, client):
        assert client.get("/api/pending", params={"kind": "mysteries"}).status_code == 400

    def test_pending_labels_with_context(self, client):
        body = client.get("/api/pending", params={"kind": "labels"}).json()
        assert body["total"] >= 2
        keys = {item["key"] for item in body["items"]}
        assert {"Cricket Fans", "Sahafi"} <= keys
        for item in body["items"]:
            assert item["verdict"] == "pending"
            assert item["version"] == 0
            assert item["payload"]["lists"] >= 1

    def test_stable_order_and_pagination(self, client):
        body = client.get("/api/pending", params={"kind": "labels"}).json()
        keys = [item["key"] for item in body["items"]]
        assert keys == sorted(keys)
        page1 = client.get(
            "/api/pending", params={"kind": "labels", "page": 1, "page_size": 2}
        ).json()
        page2 = client.get(
            "/api/pending", params={"kind": "labels", "page": 2, "page_size": 2}
        ).json()
        assert [i["key"] for i in page1["items"]] == keys[:2]
        assert [i["key"] for i in page2["items"]] == keys[2:4]

    def test_no_pending_for_samples_yet(self, client):
        body = client.get("/api/pending", params={"kind": "samples"}).json()
        assert body["total"] == 0 and body["items"] == []


class TestDecisions:
    def test_accept_appends_one_record(self, client, halted_pipeline):
        _, out = halted_pipeline
        response = client.post(
            "/api/decision", json={"id": "label:Cricket Fans", "verdict": "accept"}
        )
        assert response.status_code == 200
        assert response.json()["verdict"] == "accept"
        rows = read_jsonl(out / "decisions.jsonl")
        assert rows == [{"kind": "label", "key": "Cricket Fans",
                         "verdict": "accept", "source": "human"}]

    def test_pending_count_drops_after_decision(self, client):
        before = client.get("/api/pending", params={"kind": "labels"}).json()["total"]
        client.post("/api/decision", json={"id": "label:Sahafi", "verdict": "accept"})
        after = client.get("/api/pending", params={"kind": "labels"}).json()["total"]
        assert after == before - 1

    def test_idempotent_repeat(self, client, halted_pipeline):
        _, out = halted_pipeline
        for _ in range(2):
            response = client.post(
                "/api/decision", json={"id": "label:Sahafi", "verdict": "accept"}
            )
            assert response.status_code == 200
        assert len(read_jsonl(out / "decisions.jsonl")) == 1

    def test_conflicting_redecision_409(self, client):
        client.post("/api/decision", json={"id": "label:Sahafi", "verdict": "accept"})
        response = client.post(
            "/api/decision", json={"id": "label:Sahafi", "verdict": "reject"}
        )
        assert response.status_code == 409

    def test_stale_version_409(self, client):
        client.post("/api/decision", json={"id": "label:Sahafi", "verdict": "accept"})
        response = client.post(
            "/api/decision",
            json={"id": "label:Sahafi", "verdict": "accept", "version": 0},
        )
        assert response.status_code == 409

    def test_unknown_id_404(self, client):
        assert client.post(
            "/api/decision", json={"id": "label:No Such Label", "verdict": "accept"}
        ).status_code == 404

    def test_invalid_verdict_400(self, client):
        assert client.post(
            "/api/decision", json={"id": "label:Sahafi", "verdict": "maybe"}
        ).status_code == 400

    def test_ui_decision_visible_to_next_cli_run(self, client, halted_pipeline):
        # each accepted batch may surface fresh labels on the next round; the
        # review loop converges once every reachable label is decided
        config, out = halted_pipeline
        runner = CliRunner()
        for _ in range(6):
            items = client.get("/api/pending", params={"kind": "labels"}).json()["items"]
            for item in items:
                client.post("/api/decision", json={"id": item["id"], "verdict": "accept"})
            result = run_cli(runner, "snowball", "--config", str(config))
            if result.exit_code == 0:
                break
            assert result.exit_code == 3
        assert result.exit_code == 0, result.output
        community = read_json(out / "community.json")
        assert community["stop_reason"] != "pending-decisions"


class TestReports:
    def test_missing_report_404(self, client):
        assert client.get("/api/reports/report.json").status_code == 404

    def test_traversal_blocked(self, client):
        assert client.get("/api/reports/..%2Fconfig.json").status_code == 404

    def test_exact_bytes_and_refresh(self, halted_pipeline, e2e_dir):
        config, out = halted_pipeline
        runner = CliRunner()
        run_cli(runner, "review", "import", "--config", str(config), "--kind", "labels",
                "--file", str(e2e_dir / "labels_all_accept.json"))
        result = run_cli(runner, "run", "--config", str(config))
        assert result.exit_code == 0, result.output
        client = TestClient(create_app(out))
        response = client.get("/api/reports/report.json")
        assert response.status_code == 200
        assert response.content == (out / "report.json").read_bytes()

        # a refreshed artifact is served with its new bytes, no caching
        report = json.loads((out / "report.json").read_text())
        report["seed"] = 999
        (out / "report.json").write_text(json.dumps(report), encoding="utf-8")
        again = client.get("/api/reports/report.json")
        assert again.content == (out / "report.json").read_bytes()
        assert again.content != response.content


class TestProfileAndKeywordKinds:
    def test_profile_override_rejoins_member(self, halted_pipeline, e2e_dir):
        config, out = halted_pipeline
        runner = CliRunner()
        run_cli(runner, "review", "import", "--config", str(config), "--kind", "labels",
                "--file", str(e2e_dir / "labels_all_accept.json"))
        assert run_cli(runner, "run", "--config", str(config)).exit_code == 0

        client = TestClient(create_app(out))
        body = client.get("/api/pending", params={"kind": "profiles"}).json()
        keys = {item["key"] for item in body["items"]}
        assert keys == {"u13", "u14", "u16", "u17"}  # the auto-rejected profiles
        for item in body["items"]:
            assert item["payload"]["reason"] == "profile-filter"
            assert "location" in item["payload"]

        response = client.post("/api/decision", json={"id": "profile:u13", "verdict": "accept"})
        assert response.status_code == 200
        assert run_cli(runner, "snowball", "--config", str(config)).exit_code == 0
        community = read_json(out / "community.json")
        assert "u13" in {m["id"] for m in community["members"]}

    def test_keyword_pending_served_with_context(self, halted_pipeline, e2e_dir):
        config, out = halted_pipeline
        runner = CliRunner()
        run_cli(runner, "review", "import", "--config", str(config), "--kind", "labels",
                "--file", str(e2e_dir / "labels_all_accept.json"))
        assert run_cli(runner, "run", "--config", str(config)).exit_code == 0

        client = TestClient(create_app(out))
        body = client.get("/api/pending", params={"kind": "keywords"}).json()
        assert body["total"] > 0
        item = body["items"][0]
        assert item["payload"]["count"] >= 1
        assert item["payload"]["event"] in ("hockey-final", "capital-march")
        assert client.post(
            "/api/decision", json={"id": item["id"], "verdict": "accept"}
        ).status_code == 200
        remaining = client.get("/api/pending", params={"kind": "keywords"}).json()
        assert remaining["total"] == body["total"] - 1


class TestSampleLabelingThroughService:
    def test_sentiment_labels_unblock_evaluate(self, tmp_path, e2e_dir):
        runner = CliRunner()
        config = write_config(tmp_path, e2e_dir, evaluation_enabled=True)
        out = tmp_path / "out"
        run_cli(runner, "ingest", "--config", str(config))
        run_cli(runner, "snowball", "--config", str(config))
        run_cli(runner, "review", "import", "--config", str(config),
                "--kind", "labels", "--file", str(e2e_dir / "labels_all_accept.json"))
        for stage in ("snowball", "fetch", "events", "normalize", "classify"):
            assert run_cli(runner, stage, "--config", str(config)).exit_code == 0
        assert run_cli(runner, "evaluate", "--config", str(config)).exit_code == 3

        client = TestClient(create_app(out))
        body = client.get("/api/pending", params={"kind": "samples", "page_size": 500}).json()
        assert body["total"] > 0
        for item in body["items"]:
            assert item["payload"]["text"]  # tweet text served as context
            verdict = (
                "irrelevant" if item["payload"]["task_kind"] == "relevance" else "Positive"
            )
            response = client.post(
                "/api/decision", json={"id": item["id"], "verdict": verdict}
            )
            assert response.status_code == 200, response.text
        assert run_cli(runner, "evaluate", "--config", str(config)).exit_code == 0
