/** Trailing-edge rate limiter for mutation requests.
 *
 * Guarantees at most one call per `intervalMs` AND at most one in-flight
 * request; while a request runs, the newest pending payload wins and is sent
 * when the previous one settles (rapid threshold drags collapse to the last
 * position).
 */

export class RateLimiter<T> {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: T | undefined;
  private inFlight = false;
  private lastFired = -Infinity;

  constructor(
    private readonly send: (payload: T) => Promise<void>,
    private readonly intervalMs = 100,
    private readonly now: () => number = () => Date.now(),
  ) {}

  push(payload: T): void {
    this.pending = payload;
    this.schedule();
  }

  private schedule(): void {
    if (this.inFlight || this.timer !== null || this.pending === undefined) {
      return;
    }
    const wait = Math.max(0, this.lastFired + this.intervalMs - this.now());
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, wait);
  }

  private async fire(): Promise<void> {
    if (this.inFlight || this.pending === undefined) {
      return;
    }
    const payload = this.pending;
    this.pending = undefined;
    this.inFlight = true;
    this.lastFired = this.now();
    try {
      await this.send(payload);
    } catch {
      // the sender owns error reporting; a throw must not stop the pump
    } finally {
      this.inFlight = false;
      this.schedule();
    }
  }
}
