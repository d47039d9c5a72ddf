import { ApiClient } from "./api.js";
import {
  barWidthPercent,
  clusterBars,
  collapsedBars,
  contributorRows,
  distributionBars,
  participationRows,
  type BarDatum,
} from "./dashboard.js";
import { bindKeyboard, taskKindOf } from "./keyboard.js";
import { ReviewQueue } from "./queue.js";
import type { Envelope, PendingKind, Report } from "./types.js";

const KINDS: PendingKind[] = ["labels", "profiles", "keywords", "samples"];

const api = new ApiClient("");
let queue = new ReviewQueue(api, "labels", { onChange: renderQueue });

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function verdictButtons(item: Envelope): [string, string][] {
  const mode = taskKindOf(item);
  if (mode === "sentiment") {
    return [["Negative", "1"], ["Neutral", "2"], ["Positive", "3"]];
  }
  if (mode === "relevance") {
    return [["relevant", "a"], ["irrelevant", "r"]];
  }
  return [["accept", "a"], ["reject", "r"]];
}

function payloadLines(item: Envelope): string[] {
  const lines: string[] = [];
  for (const [key, value] of Object.entries(item.payload)) {
    if (value !== null && value !== undefined && value !== "") {
      lines.push(`${key}: ${String(value)}`);
    }
  }
  return lines;
}

function renderQueue(): void {
  const root = document.getElementById("queue");
  if (!root) return;
  root.replaceChildren();

  if (queue.offline) {
    root.append(el("div", "banner offline", "service unreachable — decisions are paused"));
  }
  const status = el(
    "div",
    "status",
    `${queue.items.length} pending · ${queue.submitted} decided this session`,
  );
  root.append(status);

  if (queue.items.length === 0) {
    root.append(el("div", "empty", "nothing pending"));
    return;
  }

  const list = el("ol", "tasks");
  queue.items.forEach((item, index) => {
    const row = el("li", index === queue.position ? "task current" : "task");
    row.append(el("span", "key", item.key));
    for (const line of payloadLines(item)) {
      row.append(el("span", "context", line));
    }
    const actions = el("span", "actions");
    for (const [verdict, hint] of verdictButtons(item)) {
      const button = el("button", "verdict", `${verdict} (${hint})`) as HTMLButtonElement;
      button.addEventListener("click", () => {
        queue.position = index;
        void queue.submit(verdict);
      });
      actions.append(button);
    }
    row.append(actions);
    list.append(row);
  });
  root.append(list);
}

function bars(data: BarDatum[]): HTMLElement {
  const wrap = el("div", "bars");
  for (const datum of data) {
    const row = el("div", "bar-row");
    row.append(el("span", "bar-label", datum.label));
    const track = el("div", "bar-track");
    const fill = el("div", "bar-fill");
    fill.style.width = `${barWidthPercent(datum.value, data)}%`;
    track.append(fill);
    row.append(track);
    row.append(el("span", "bar-value", `${datum.value} (${datum.percentage}%)`));
    wrap.append(row);
  }
  return wrap;
}

function renderDashboard(report: Report | null): void {
  const root = document.getElementById("dashboard");
  if (!root) return;
  root.replaceChildren();
  if (report === null) {
    root.append(el("div", "empty", "no report yet — run the report stage"));
    return;
  }
  root.append(
    el("div", "status",
       `community: ${report.community.size} members (${report.community.stop_reason})`),
  );

  const table = el("table", "participation");
  const head = el("tr");
  for (const column of ["event", "tweets", "participants", "participation"]) {
    head.append(el("th", undefined, column));
  }
  table.append(head);
  for (const row of participationRows(report)) {
    const tr = el("tr");
    tr.append(el("td", undefined, row.event));
    tr.append(el("td", undefined, String(row.tweets)));
    tr.append(el("td", undefined, String(row.participants)));
    tr.append(el("td", undefined, `${row.percentage}%`));
    table.append(tr);
  }
  root.append(table);

  for (const [name, event] of Object.entries(report.events)) {
    const section = el("section", "event");
    section.append(el("h3", undefined, name));
    for (const [analyzer, block] of Object.entries(event.distributions)) {
      section.append(el("h4", undefined, `${analyzer} distribution`));
      section.append(bars(distributionBars(block)));
      section.append(el("h4", undefined, `${analyzer} collapsed`));
      section.append(bars(collapsedBars(block)));
    }
    section.append(el("h4", undefined, "users by distinct classes"));
    section.append(bars(clusterBars(event)));
    section.append(el("h4", undefined, "top contributors"));
    const contributors = el("ol", "contributors");
    for (const row of contributorRows(event)) {
      contributors.append(el("li", undefined, `${row.user_id} — ${row.tweets} tweets`));
    }
    section.append(contributors);
    root.append(section);
  }
}

async function refreshDashboard(): Promise<void> {
  try {
    renderDashboard(await api.report("report.json"));
  } catch {
    renderDashboard(null);
  }
}

function selectKind(kind: PendingKind): void {
  queue = new ReviewQueue(api, kind, { onChange: renderQueue });
  document.querySelectorAll(".tab").forEach((node) => {
    node.classList.toggle("active", node.id === `tab-${kind}`);
  });
  void queue.load();
}

export function boot(): void {
  const tabs = document.getElementById("tabs");
  if (tabs) {
    for (const kind of KINDS) {
      const tab = el("button", "tab", kind) as HTMLButtonElement;
      tab.id = `tab-${kind}`;
      tab.addEventListener("click", () => selectKind(kind));
      tabs.append(tab);
    }
    const refresh = el("button", "tab refresh", "refresh") as HTMLButtonElement;
    refresh.addEventListener("click", () => {
      void queue.load();
      void refreshDashboard();
    });
    tabs.append(refresh);
  }

  bindKeyboard(
    window,
    (command) => {
      if (command.type === "nav") {
        command.direction === 1 ? queue.next() : queue.prev();
      } else {
        void queue.submit(command.verdict);
      }
    },
    () => queue.current,
  );

  selectKind("labels");
  void refreshDashboard();
}

if (typeof document !== "undefined" && document.getElementById("tabs")) {
  boot();
}
