// Full round-trip against the real review service: the browser-side client
// approves pending labels and labels a 10-tweet sample, which must unblock
// the snowball and evaluate stages on the next CLI run. Requires the Python
// package to be installed (python3 -m crowdsent.cli).

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { clusterBars, distributionBars, participationRows } from "../src/dashboard.js";
import { commandForKey } from "../src/keyboard.js";
import { ReviewQueue } from "../src/queue.js";
import type { Report } from "../src/types.js";

const FIXTURES = resolve(__dirname, "../../tests/fixtures/e2e");
const PORT = 8473;
const BASE = `http://127.0.0.1:${PORT}`;

let workdir: string;
let configPath: string;
let outDir: string;
let server: ChildProcess | null = null;

function cli(...args: string[]): { status: number; output: string } {
  const result = spawnSync("python3", ["-m", "crowdsent.cli", ...args], {
    encoding: "utf-8",
  });
  return { status: result.status ?? -1, output: result.stdout + result.stderr };
}

function decisions(): { kind: string; key: string; verdict: string; source: string }[] {
  return readFileSync(join(outDir, "decisions.jsonl"), "utf-8")
    .split("\n")
    .filter((line) => line.trim())
    .map((line) => JSON.parse(line));
}

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/api/pending?kind=labels`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolveWait) => setTimeout(resolveWait, 100));
  }
  throw new Error("review service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "crowdsent-ui-"));
  outDir = join(workdir, "out");

  // single event so evaluation draws exactly 4+3+3 = 10 sample tweets
  const events = [
    {
      name: "hockey-final",
      seed_keywords: ["hockey", "trophy"],
      window: { start: "2014-12-06T00:00:00Z", end: "2014-12-14T23:59:59Z" },
      expansion: { source: "matched-tweets", top_k: 10, min_count: 3 },
    },
  ];
  writeFileSync(join(workdir, "events.json"), JSON.stringify(events));

  // keywords leave exactly two round-1 labels pending: "Journos", "TV Anchors"
  const config = {
    seed: 42,
    output_dir: outDir,
    corpus: {
      users: join(FIXTURES, "users.jsonl"),
      lists: join(FIXTURES, "lists.jsonl"),
      tweets: join(FIXTURES, "tweets.jsonl"),
    },
    gateway: {
      backend: "fixture",
      credentials: [{ key_id: "k1", budget: 1000000 }],
    },
    snowball: {
      seed_user_ids: ["u01", "u02", "u03"],
      label_keywords: ["journalist"],
      max_rounds: 1,
      target_size: 1000,
      profile_filter: { location_keywords: ["pakistan"] },
      pending_policy: "halt",
    },
    events: join(workdir, "events.json"),
    normalization: {},
    lexicons: {},
    evaluation: {
      enabled: true,
      relevance_sample_size: 4,
      recall_sample_size: 3,
      sentiment_sample_size: 3,
    },
  };
  configPath = join(workdir, "config.json");
  writeFileSync(configPath, JSON.stringify(config, null, 2));

  expect(cli("ingest", "--config", configPath).status).toBe(0);
  expect(cli("snowball", "--config", configPath).status).toBe(3); // pending labels

  server = spawn(
    "python3",
    ["-m", "crowdsent.cli", "serve", "--config", configPath, "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe("review round-trip through the service", () => {
  const api = new ApiClient(BASE);

  it("approves the two pending labels and unblocks snowball", async () => {
    const queue = new ReviewQueue(api, "labels");
    await queue.load();
    expect(queue.items.map((i) => i.key)).toEqual(["Journos", "TV Anchors"]);

    // keyboard path: "a" accepts the focused label
    for (let i = 0; i < 2; i++) {
      const command = commandForKey("a", queue.current);
      expect(command).toEqual({ type: "verdict", verdict: "accept" });
      if (command?.type === "verdict") {
        expect(await queue.submit(command.verdict)).toBe("ok");
      }
    }
    expect(queue.items).toEqual([]);

    expect(decisions()).toEqual([
      { kind: "label", key: "Journos", verdict: "accept", source: "human" },
      { kind: "label", key: "TV Anchors", verdict: "accept", source: "human" },
    ]);

    expect(cli("snowball", "--config", configPath).status).toBe(0);
  }, 30_000);

  it("labels the 10-tweet sample and unblocks evaluate", async () => {
    for (const stage of ["fetch", "events", "normalize", "classify"]) {
      expect(cli(stage, "--config", configPath).status).toBe(0);
    }
    expect(cli("evaluate", "--config", configPath).status).toBe(3); // samples pending

    const queue = new ReviewQueue(api, "samples");
    await queue.load();
    expect(queue.items).toHaveLength(10);
    expect(queue.items.every((i) => typeof i.payload["text"] === "string")).toBe(true);

    while (queue.current !== null) {
      const item = queue.current;
      const key = item.payload["task_kind"] === "relevance" ? "a" : "3";
      const command = commandForKey(key, item);
      if (command?.type !== "verdict") throw new Error("expected a verdict command");
      expect(await queue.submit(command.verdict)).toBe("ok");
    }
    expect(queue.submitted).toBe(10);

    const all = decisions();
    expect(all).toHaveLength(12); // exactly the submitted records, nothing else
    const samples = all.filter((d) => d.kind === "sample");
    expect(samples).toHaveLength(10);
    expect(
      samples.every((d) => ["relevant", "Positive"].includes(d.verdict)),
    ).toBe(true);

    expect(cli("evaluate", "--config", configPath).status).toBe(0);
    expect(cli("report", "--config", configPath).status).toBe(0);
  }, 60_000);

  it("dashboard values are byte-equal to the report API payload", async () => {
    const raw = await api.reportBytes("report.json");
    expect(raw).toBe(readFileSync(join(outDir, "report.json"), "utf-8"));

    const report = JSON.parse(raw) as Report;
    const rows = participationRows(report);
    for (const row of rows) {
      const event = report.events[row.event];
      expect(row.percentage).toBe(event.participation.percentage);
      expect(row.tweets).toBe(event.tweets);
      expect(row.participants).toBe(event.participants);
    }
    for (const event of Object.values(report.events)) {
      for (const block of Object.values(event.distributions)) {
        const bars = distributionBars(block);
        for (const bar of bars) {
          expect(bar.value).toBe(block.counts[bar.label]);
          expect(bar.percentage).toBe(block.percentages[bar.label]);
        }
      }
      const clusters = clusterBars(event);
      expect(clusters.map((b) => b.percentage)).toEqual(
        Object.keys(event.category_clusters.buckets)
          .sort()
          .map((k) => event.category_clusters.percentages[k]),
      );
    }
  });
});
