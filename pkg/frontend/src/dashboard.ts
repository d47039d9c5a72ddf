// Read-only projections of report.json for rendering. Values pass through
// verbatim: counts stay numbers, percentages stay the server's strings, so
// displayed figures are byte-equal to the API payload.

import { FIVE_WAY, type DistributionBlock, type EventReport, type Report } from "./types.js";

export interface BarDatum {
  label: string;
  value: number;
  percentage: string;
}

export function distributionBars(block: DistributionBlock): BarDatum[] {
  return FIVE_WAY.map((label) => ({
    label,
    value: block.counts[label] ?? 0,
    percentage: block.percentages[label] ?? "0.00",
  }));
}

export function collapsedBars(block: DistributionBlock): BarDatum[] {
  return Object.keys(block.collapsed_counts).map((label) => ({
    label,
    value: block.collapsed_counts[label],
    percentage: block.collapsed_percentages[label],
  }));
}

export interface ParticipationRow {
  event: string;
  tweets: number;
  participants: number;
  percentage: string;
}

export function participationRows(report: Report): ParticipationRow[] {
  return Object.entries(report.events).map(([event, data]) => ({
    event,
    tweets: data.tweets,
    participants: data.participants,
    percentage: data.participation.percentage,
  }));
}

export function clusterBars(event: EventReport): BarDatum[] {
  return Object.keys(event.category_clusters.buckets)
    .sort()
    .map((bucket) => ({
      label: `${bucket} class${bucket === "1" ? "" : "es"}`,
      value: event.category_clusters.buckets[bucket],
      percentage: event.category_clusters.percentages[bucket],
    }));
}

export interface ContributorRow {
  rank: number;
  user_id: string;
  tweets: number;
}

export function contributorRows(event: EventReport): ContributorRow[] {
  return event.top_contributors.map((entry, index) => ({
    rank: index + 1,
    user_id: entry.user_id,
    tweets: entry.tweets,
  }));
}

/** Width scale for proportional bars; the displayed numbers stay verbatim. */
export function barWidthPercent(value: number, data: BarDatum[]): number {
  const max = Math.max(1, ...data.map((d) => d.value));
  return Math.round((value / max) * 1000) / 10;
}
