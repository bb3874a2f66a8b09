// Deadline countdown. The server advances the logical clock (one tick per
// interval); between pushes the client decrements a local estimate so the
// display moves every second. Server state stays authoritative.

export class LocalCountdown {
  private base = 0;
  private syncedAt = 0;
  private intervalMs: number;

  constructor(intervalMs = 1000) {
    this.intervalMs = intervalMs;
  }

  /** Re-anchor on every server event. */
  sync(ticksLeft: number, now: number = Date.now()) {
    this.base = Math.max(ticksLeft, 0);
    this.syncedAt = now;
  }

  current(now: number = Date.now()): number {
    const elapsed = Math.floor((now - this.syncedAt) / this.intervalMs);
    return Math.max(this.base - elapsed, 0);
  }

  expired(now: number = Date.now()): boolean {
    return this.current(now) === 0;
  }
}

export function formatTicks(ticks: number): string {
  return ticks === 1 ? "1 tick" : `${ticks} ticks`;
}
