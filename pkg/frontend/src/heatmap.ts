/** Canvas heatmap of the combined-score grid (2D datasets only). */

import { heatColor } from "./colors.js";
import type { GridPayload } from "./types.js";

export function drawHeatmap(canvas: HTMLCanvasElement, grid: GridPayload): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const res = grid.resolution;
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of grid.values) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const span = hi - lo || 1;
  const cw = canvas.width / res;
  const ch = canvas.height / res;
  for (let iy = 0; iy < res; iy++) {
    for (let ix = 0; ix < res; ix++) {
      // row iy holds y = ymin + iy/(res-1) * span; canvas y runs downward
      ctx.fillStyle = heatColor((grid.values[iy][ix] - lo) / span);
      ctx.fillRect(ix * cw, canvas.height - (iy + 1) * ch, cw + 0.5, ch + 0.5);
    }
  }
}
