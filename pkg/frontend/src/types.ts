// Wire types for the review service JSON API. These mirror the documented
// schemas exactly; the UI never reshapes or recomputes server values.

export interface Envelope {
  id: string;
  kind: "label" | "profile" | "keyword" | "sample";
  key: string;
  payload: Record<string, unknown>;
  verdict: string;
  version: number;
}

export interface PendingPage {
  kind: string;
  page: number;
  page_size: number;
  total: number;
  items: Envelope[];
}

export type PendingKind = "labels" | "profiles" | "keywords" | "samples";

export interface DistributionBlock {
  total: number;
  counts: Record<string, number>;
  percentages: Record<string, string>;
  collapsed_counts: Record<string, number>;
  collapsed_percentages: Record<string, string>;
}

export interface ParticipationBlock {
  participants: number;
  community_size: number;
  fraction: number;
  percentage: string;
}

export interface ClusterBlock {
  users: number;
  buckets: Record<string, number>;
  percentages: Record<string, string>;
}

export interface Contributor {
  user_id: string;
  tweets: number;
}

export interface EventEvaluation {
  precision: number | null;
  recall_estimate: number | null;
  analyzer_precision: Record<string, number>;
}

export interface EventReport {
  tweets: number;
  seed_only_tweets: number;
  participants: number;
  participation: ParticipationBlock;
  distributions: Record<string, DistributionBlock>;
  category_clusters: ClusterBlock;
  top_contributors: Contributor[];
  agreement: { fraction: number; total: number } | null;
  evaluation: EventEvaluation | null;
}

export interface Report {
  seed: number;
  community: { size: number; stop_reason: string };
  events: Record<string, EventReport>;
}

export const FIVE_WAY = [
  "VeryNegative",
  "Negative",
  "Neutral",
  "Positive",
  "VeryPositive",
] as const;

export const THREE_WAY = ["Negative", "Neutral", "Positive"] as const;
