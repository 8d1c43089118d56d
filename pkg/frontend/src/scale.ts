/** Linear data<->pixel mapping for the scatter plots (pure presentation). */

export class LinearScale {
  constructor(
    public readonly d0: number,
    public readonly d1: number,
    public readonly r0: number,
    public readonly r1: number,
  ) {}

  apply(v: number): number {
    const span = this.d1 - this.d0;
    if (span === 0) {
      return (this.r0 + this.r1) / 2;
    }
    return this.r0 + ((v - this.d0) / span) * (this.r1 - this.r0);
  }

  invert(px: number): number {
    const span = this.r1 - this.r0;
    if (span === 0) {
      return this.d0;
    }
    return this.d0 + ((px - this.r0) / span) * (this.d1 - this.d0);
  }
}

/** Screen-space pan/zoom applied on top of the base scales.
 *
 * Pure presentation: transforms only remap pixels, never data values, so
 * payloads are untouched by construction.
 */
export class Viewport {
  constructor(
    public readonly scale: number = 1,
    public readonly ox: number = 0,
    public readonly oy: number = 0,
  ) {}

  applyX(px: number): number {
    return this.ox + this.scale * px;
  }

  applyY(px: number): number {
    return this.oy + this.scale * px;
  }

  invertX(px: number): number {
    return (px - this.ox) / this.scale;
  }

  invertY(px: number): number {
    return (px - this.oy) / this.scale;
  }

  /** Zoom by `factor` keeping the screen point (cx, cy) fixed. */
  zoomAt(factor: number, cx: number, cy: number): Viewport {
    const scale = Math.min(50, Math.max(0.2, this.scale * factor));
    const ratio = scale / this.scale;
    return new Viewport(scale, cx - ratio * (cx - this.ox), cy - ratio * (cy - this.oy));
  }

  panBy(dx: number, dy: number): Viewport {
    return new Viewport(this.scale, this.ox + dx, this.oy + dy);
  }

  get identity(): boolean {
    return this.scale === 1 && this.ox === 0 && this.oy === 0;
  }
}

/** Domain padded a little beyond the data so edge dots stay visible. */
export function paddedDomain(values: number[], frac = 0.05): [number, number] {
  if (values.length === 0) {
    return [0, 1];
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const pad = (hi - lo || 1) * frac;
  return [lo - pad, hi + pad];
}
