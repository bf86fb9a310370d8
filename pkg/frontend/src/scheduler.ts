import type { Report } from './types.js';

export interface SchedulerCallbacks {
  onReport: (report: Report) => void;
  onError: (error: unknown) => void;
  /** Called when a request is started or settles, for a busy indicator. */
  onBusy?: (busy: boolean) => void;
}

/**
 * Debounced rechecking with a stale-response guard.
 *
 * Each edit restarts the debounce timer; only the response matching the
 * latest edit is delivered.  At most one request is in flight: an edit
 * arriving mid-flight is re-checked once the current request settles.
 */
export class CheckScheduler {
  private editCounter = 0;
  private timer: ReturnType<typeof setTimeout> | undefined;
  private inFlight = false;
  private queued: { text: string; edit: number } | null = null;

  constructor(
    private readonly check: (script: string) => Promise<Report>,
    private readonly callbacks: SchedulerCallbacks,
    private readonly delayMs: number = 400,
  ) {}

  /** Schedule a check for the editor contents after the debounce delay. */
  noteEdit(text: string): void {
    this.editCounter += 1;
    const edit = this.editCounter;
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = undefined;
      void this.fire(text, edit);
    }, this.delayMs);
  }

  /** Check immediately (used when loading an example). */
  checkNow(text: string): void {
    this.editCounter += 1;
    if (this.timer !== undefined) {
      clearTimeout(this.timer);
      this.timer = undefined;
    }
    void this.fire(text, this.editCounter);
  }

  dispose(): void {
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.editCounter += 1; // invalidate any in-flight response
  }

  private async fire(text: string, edit: number): Promise<void> {
    if (this.inFlight) {
      this.queued = { text, edit };
      return;
    }
    this.inFlight = true;
    this.callbacks.onBusy?.(true);
    try {
      const report = await this.check(text);
      if (edit === this.editCounter) this.callbacks.onReport(report);
    } catch (error) {
      if (edit === this.editCounter) this.callbacks.onError(error);
    } finally {
      this.inFlight = false;
      this.callbacks.onBusy?.(false);
      if (this.queued !== null) {
        const next = this.queued;
        this.queued = null;
        void this.fire(next.text, next.edit);
      }
    }
  }
}
