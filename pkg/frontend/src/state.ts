/** Client-side view state helpers: validation, staleness, mark bookkeeping.
 *
 * Classification is never derived locally; the server response is the only
 * source of point types. These helpers shape requests and gate responses.
 */

import type { ParamsBody } from "./types.js";

export const AGGREGATORS = ["max", "mean", "median"] as const;

/** Mirror of the server-side parameter rules; used to reject bad input before
 * any request is made. Returns an error string, or null when valid. */
export function validateParams(p: ParamsBody): string | null {
  if (p.k !== undefined && (!Number.isInteger(p.k) || p.k < 1)) {
    return "k must be an integer >= 1";
  }
  if (p.mu !== undefined && !(p.mu >= 0 && p.mu <= 1)) {
    return "mu must be in [0, 1]";
  }
  if (p.w1 !== undefined && !(p.w1 >= 0)) {
    return "w1 must be >= 0";
  }
  if (p.w2 !== undefined && !(p.w2 >= 0)) {
    return "w2 must be >= 0";
  }
  if (p.agg !== undefined && !AGGREGATORS.includes(p.agg)) {
    return `agg must be one of ${AGGREGATORS.join(", ")}`;
  }
  const mu = p.mu ?? 0;
  if (p.w1 === 0 && p.w2 === 0 && mu < 1) {
    return "w1 and w2 cannot both be 0 when mu < 1";
  }
  return null;
}

/** Tracks the latest model generation; responses from older generations are
 * discarded so the UI never renders mixed state. */
export class GenerationGate {
  private latest = 0;

  /** Record a generation observed on any response; returns true when the
   * response is current (>= everything seen so far). */
  accept(generation: number): boolean {
    if (generation < this.latest) {
      return false;
    }
    this.latest = generation;
    return true;
  }

  get current(): number {
    return this.latest;
  }
}

/** Pure mark-set transition: returns a new set, never mutates. Toggling to
 * the present state is a no-op (idempotent). */
export function withMark(marked: ReadonlySet<number>, id: number, on: boolean): Set<number> {
  const next = new Set(marked);
  if (on) {
    next.add(id);
  } else {
    next.delete(id);
  }
  return next;
}
