import { ApiError, OfflineError } from "./api.js";
import type { Envelope, PendingKind, PendingPage } from "./types.js";

export type SubmitOutcome = "ok" | "conflict" | "offline" | "noop";

export interface QueueListener {
  onChange(): void;
}

/** The slice of the API client the queue needs (eases test doubles). */
export interface PendingApi {
  pending(kind: PendingKind, page?: number, pageSize?: number): Promise<PendingPage>;
  decide(id: string, verdict: string, version?: number): Promise<Envelope>;
}

/**
 * Pending-item queue with optimistic submission.
 *
 * A verdict is submittable exactly once per envelope version: the item is
 * removed optimistically, re-inserted (with a refreshed version) when the
 * service answers 409, and re-inserted unchanged when the service is
 * unreachable so no decision is ever lost locally.
 */
export class ReviewQueue {
  items: Envelope[] = [];
  position = 0;
  total = 0;
  offline = false;
  submitted = 0;
  private inflight = new Set<string>();

  constructor(
    private readonly api: PendingApi,
    readonly kind: PendingKind,
    private readonly listener?: QueueListener,
  ) {}

  private changed(): void {
    this.listener?.onChange();
  }

  async load(pageSize = 200): Promise<void> {
    try {
      const page = await this.api.pending(this.kind, 1, pageSize);
      this.items = page.items;
      this.total = page.total;
      this.offline = false;
      this.position = Math.min(this.position, Math.max(0, this.items.length - 1));
    } catch (error) {
      if (error instanceof OfflineError) {
        this.offline = true;
      } else {
        throw error;
      }
    }
    this.changed();
  }

  get current(): Envelope | null {
    return this.items[this.position] ?? null;
  }

  next(): void {
    if (this.position < this.items.length - 1) {
      this.position += 1;
      this.changed();
    }
  }

  prev(): void {
    if (this.position > 0) {
      this.position -= 1;
      this.changed();
    }
  }

  async submit(verdict: string): Promise<SubmitOutcome> {
    const item = this.current;
    if (item === null) return "noop";
    const token = `${item.id}@${item.version}`;
    if (this.inflight.has(token)) return "noop"; // double-submit guard
    this.inflight.add(token);

    const index = this.position;
    this.items.splice(index, 1); // optimistic removal
    this.position = Math.min(this.position, Math.max(0, this.items.length - 1));
    this.changed();

    try {
      await this.api.decide(item.id, verdict, item.version);
      this.total -= 1;
      this.submitted += 1;
      this.offline = false;
      this.changed();
      return "ok";
    } catch (error) {
      this.inflight.delete(token);
      if (error instanceof ApiError && error.status === 409) {
        // stale envelope: roll back, then refresh from the service
        this.items.splice(index, 0, item);
        this.position = index;
        await this.load();
        return "conflict";
      }
      if (error instanceof OfflineError) {
        this.items.splice(index, 0, item); // nothing lost while offline
        this.position = index;
        this.offline = true;
        this.changed();
        return "offline";
      }
      throw error;
    }
  }
}
