import { describe, expect, it } from "vitest";

import {
  barWidthPercent,
  clusterBars,
  collapsedBars,
  contributorRows,
  distributionBars,
  participationRows,
} from "../src/dashboard.js";
import type { DistributionBlock, EventReport, Report } from "../src/types.js";

const block: DistributionBlock = {
  total: 27,
  counts: { VeryNegative: 5, Negative: 10, Neutral: 3, Positive: 7, VeryPositive: 2 },
  percentages: {
    VeryNegative: "18.52", Negative: "37.04", Neutral: "11.11",
    Positive: "25.93", VeryPositive: "7.41",
  },
  collapsed_counts: { Negative: 15, Neutral: 3, Positive: 9 },
  collapsed_percentages: { Negative: "55.56", Neutral: "11.11", Positive: "33.33" },
};

const event: EventReport = {
  tweets: 27,
  seed_only_tweets: 20,
  participants: 4,
  participation: { participants: 4, community_size: 15, fraction: 4 / 15, percentage: "26.67" },
  distributions: { "fine-grained": block },
  category_clusters: {
    users: 4,
    buckets: { "1": 1, "2": 2, "3": 1, "4": 0, "5": 0 },
    percentages: { "1": "25.00", "2": "50.00", "3": "25.00", "4": "0.00", "5": "0.00" },
  },
  top_contributors: [
    { user_id: "u5", tweets: 12 },
    { user_id: "u2", tweets: 9 },
  ],
  agreement: { fraction: 0.8, total: 27 },
  evaluation: null,
};

const report: Report = {
  seed: 42,
  community: { size: 15, stop_reason: "fixed-point" },
  events: { "storm-week": event },
};

describe("dashboard projections render service values verbatim", () => {
  it("distribution bars carry the exact counts and percentage strings", () => {
    const bars = distributionBars(block);
    expect(bars.map((b) => b.value)).toEqual([5, 10, 3, 7, 2]);
    // percentage strings must be byte-equal to the payload, never recomputed
    expect(bars.map((b) => b.percentage)).toEqual(
      ["VeryNegative", "Negative", "Neutral", "Positive", "VeryPositive"].map(
        (k) => block.percentages[k],
      ),
    );
  });

  it("collapsed bars mirror the collapsed payload", () => {
    const bars = collapsedBars(block);
    expect(Object.fromEntries(bars.map((b) => [b.label, b.value]))).toEqual(
      block.collapsed_counts,
    );
    expect(Object.fromEntries(bars.map((b) => [b.label, b.percentage]))).toEqual(
      block.collapsed_percentages,
    );
  });

  it("participation rows pass the percentage string through", () => {
    expect(participationRows(report)).toEqual([
      { event: "storm-week", tweets: 27, participants: 4, percentage: "26.67" },
    ]);
  });

  it("cluster bars keep bucket order and values", () => {
    const bars = clusterBars(event);
    expect(bars.map((b) => b.value)).toEqual([1, 2, 1, 0, 0]);
    expect(bars.map((b) => b.percentage)).toEqual(
      ["25.00", "50.00", "25.00", "0.00", "0.00"],
    );
  });

  it("contributors keep service order with ranks", () => {
    expect(contributorRows(event)).toEqual([
      { rank: 1, user_id: "u5", tweets: 12 },
      { rank: 2, user_id: "u2", tweets: 9 },
    ]);
  });

  it("bar widths scale to the maximum without touching values", () => {
    const bars = distributionBars(block);
    expect(barWidthPercent(10, bars)).toBe(100);
    expect(barWidthPercent(5, bars)).toBe(50);
  });
});
