// Local verdict queue: verdicts are applied optimistically in the UI and
// queued here until the server acknowledges them, so a dropped connection
// or a judgment lock during an iteration never loses a verdict. One entry
// per candidate text (the last verdict wins), which doubles as the
// idempotency key.

import { ApiError, type Verdict } from './api.js';

export interface QueueEntry {
  text: string;
  verdict: Verdict;
}

export type SubmitFn = (text: string, verdict: Verdict) => Promise<unknown>;

export type QueueListener = (state: {
  pending: number;
  blocked: boolean;
  lastError: string | null;
}) => void;

export class VerdictQueue {
  private entries = new Map<string, Verdict>();
  private flushing = false;
  private blocked = false;
  private lastError: string | null = null;

  constructor(
    private submit: SubmitFn,
    private listener: QueueListener = () => {},
  ) {}

  get pending(): number {
    return this.entries.size;
  }

  get isBlocked(): boolean {
    return this.blocked;
  }

  enqueue(text: string, verdict: Verdict): void {
    this.entries.set(text, verdict);
    this.notify();
  }

  private notify(): void {
    this.listener({
      pending: this.entries.size,
      blocked: this.blocked,
      lastError: this.lastError,
    });
  }

  /** Push queued verdicts to the server; entries that fail stay queued.
   *
   * Drains the live map rather than a snapshot, so verdicts enqueued while
   * a flush is already in flight are picked up by that same flush (the
   * concurrent caller's flush() is a no-op).
   */
  async flush(): Promise<void> {
    if (this.flushing) return;
    this.flushing = true;
    try {
      while (this.entries.size > 0) {
        const [text, verdict] = this.entries.entries().next().value as [string, Verdict];
        try {
          await this.submit(text, verdict);
          // a newer verdict may have been enqueued while in flight
          if (this.entries.get(text) === verdict) this.entries.delete(text);
          this.blocked = false;
          this.lastError = null;
        } catch (err) {
          if (err instanceof ApiError && err.status === 404) {
            // candidate vanished from the pool; nothing to retry
            this.entries.delete(text);
            this.lastError = err.detail;
            continue;
          }
          // network failure or judgment lock: keep the entry for retry
          this.blocked = true;
          this.lastError = err instanceof Error ? err.message : String(err);
          break;
        }
      }
    } finally {
      this.flushing = false;
      this.notify();
    }
  }
}
