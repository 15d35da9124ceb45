// Debounced, single-flight request runner. Rapid schedule() calls collapse to
// one execution per quiet window; a call arriving while a request is in the
// air queues exactly one follow-up; results are applied in request order and
// anything superseded is dropped.

export class RequestScheduler<T> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;
  private appliedSeq = 0;
  private inFlight = false;
  private pending = false;

  constructor(
    private readonly execute: () => Promise<T>,
    private readonly apply: (result: T) => void,
    private readonly fail: (error: unknown) => void,
    readonly delayMs = 250,
  ) {}

  /** Debounced trailing-edge trigger. */
  schedule(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.delayMs);
  }

  /** Skip the quiet window (initial load, dataset switch). */
  scheduleNow(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.fire();
  }

  get busy(): boolean {
    return this.inFlight;
  }

  private async fire(): Promise<void> {
    if (this.inFlight) {
      this.pending = true;
      return;
    }
    this.inFlight = true;
    const seq = ++this.seq;
    try {
      const result = await this.execute();
      if (seq > this.appliedSeq && !this.pending) {
        this.appliedSeq = seq;
        this.apply(result);
      }
    } catch (error) {
      if (seq > this.appliedSeq && !this.pending) {
        this.fail(error);
      }
    } finally {
      this.inFlight = false;
      if (this.pending) {
        this.pending = false;
        void this.fire();
      }
    }
  }
}
