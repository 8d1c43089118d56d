/** Outlier-type color lookup: the one place server classifications turn
 * into pixels. No other client code assigns types. */

import type { OutlierKind } from "./types.js";

export const TYPE_COLORS: Record<OutlierKind, string> = {
  normal: "#8a93a6",
  I: "#e5484d",
  II: "#f5a524",
  III: "#3e8bff",
};

export const TYPE_LABELS: Record<OutlierKind, string> = {
  normal: "normal",
  I: "type I (both)",
  II: "type II (spatial)",
  III: "type III (density)",
};

export function colorOf(kind: OutlierKind): string {
  return TYPE_COLORS[kind];
}

/** Grayscale-to-warm ramp for the score heatmap; t in [0, 1]. */
export function heatColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const r = Math.round(30 + 225 * clamped);
  const g = Math.round(34 + 120 * (1 - Math.abs(clamped - 0.5) * 2) + 60 * clamped);
  const b = Math.round(46 + 160 * (1 - clamped));
  return `rgb(${r},${g},${b})`;
}
