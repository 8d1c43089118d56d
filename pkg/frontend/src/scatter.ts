/** Anomaly-space scatter: density anomaly (k_p) on the horizontal axis,
 * spatial anomaly (k_e) vertical, with the two classification thresholds
 * drawn as draggable rules. Wheel zooms, background drag pans, double-click
 * resets; the viewport only remaps pixels and never touches payloads. */

import { colorOf } from "./colors.js";
import { LinearScale, paddedDomain, Viewport } from "./scale.js";
import type { OutlierKind, SpacePoint, Thresholds } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MARGIN = { top: 12, right: 16, bottom: 34, left: 48 };

export interface ScatterCallbacks {
  onThresholdDrag(t: Thresholds): void;
  onPointClick(id: number): void;
}

export class ScatterPlot {
  private xScale = new LinearScale(0, 1, 0, 1);
  private yScale = new LinearScale(0, 1, 0, 1);
  private view = new Viewport();
  private points: SpacePoint[] = [];
  private types: OutlierKind[] = [];
  private thresholds: Thresholds = { t_e: 0, t_p: 0 };
  private marked = new Set<number>();
  private dragging: "t_e" | "t_p" | "pan" | null = null;
  private lastPointer = { x: 0, y: 0 };

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly callbacks: ScatterCallbacks,
  ) {
    svg.addEventListener("pointerdown", (ev) => this.onPointerDown(ev));
    svg.addEventListener("pointermove", (ev) => this.onPointerMove(ev));
    svg.addEventListener("pointerup", () => (this.dragging = null));
    svg.addEventListener("pointerleave", () => (this.dragging = null));
    svg.addEventListener("wheel", (ev) => this.onWheel(ev), { passive: false });
    svg.addEventListener("dblclick", () => {
      this.view = new Viewport();
      this.render();
    });
  }

  update(points: SpacePoint[], types: OutlierKind[], thresholds: Thresholds, marked: Set<number>): void {
    this.points = points;
    this.types = types;
    this.thresholds = thresholds;
    this.marked = marked;
    this.render();
  }

  setTypes(types: OutlierKind[], thresholds: Thresholds): void {
    this.types = types;
    this.thresholds = thresholds;
    this.render();
  }

  setMarked(marked: Set<number>): void {
    this.marked = marked;
    this.render();
  }

  private plotArea(): { w: number; h: number } {
    const rect = this.svg.getBoundingClientRect();
    return {
      w: Math.max(10, rect.width - MARGIN.left - MARGIN.right),
      h: Math.max(10, rect.height - MARGIN.top - MARGIN.bottom),
    };
  }

  private px(v: number): number {
    return this.view.applyX(this.xScale.apply(v));
  }

  private py(v: number): number {
    return this.view.applyY(this.yScale.apply(v));
  }

  private render(): void {
    const { w, h } = this.plotArea();
    this.xScale = new LinearScale(...paddedDomain(this.points.map((p) => p.k_p)), MARGIN.left, MARGIN.left + w);
    this.yScale = new LinearScale(...paddedDomain(this.points.map((p) => p.k_e)), MARGIN.top + h, MARGIN.top);

    this.svg.replaceChildren();
    if (this.points.length === 0) {
      const empty = document.createElementNS(SVG_NS, "text");
      empty.setAttribute("x", "50%");
      empty.setAttribute("y", "50%");
      empty.setAttribute("class", "empty-note");
      empty.textContent = "no anomaly points loaded";
      this.svg.appendChild(empty);
      return;
    }

    this.drawAxes(w, h);
    const clip = this.ensureClip(w, h);
    for (let i = 0; i < this.points.length; i++) {
      const p = this.points[i];
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(this.px(p.k_p)));
      dot.setAttribute("cy", String(this.py(p.k_e)));
      dot.setAttribute("r", this.types[i] === "normal" ? "3" : "4.5");
      dot.setAttribute("fill", colorOf(this.types[i] ?? "normal"));
      dot.setAttribute("clip-path", `url(#${clip})`);
      if (this.marked.has(p.id)) {
        dot.setAttribute("stroke", "#ffffff");
        dot.setAttribute("stroke-width", "1.8");
      }
      dot.addEventListener("click", (ev) => {
        ev.stopPropagation();
        this.callbacks.onPointClick(p.id);
      });
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = `#${p.id}  k_e=${p.k_e.toPrecision(4)}  k_p=${p.k_p.toPrecision(4)}`;
      dot.appendChild(tip);
      this.svg.appendChild(dot);
    }
    this.drawThresholdLines(w, h, clip);
  }

  private ensureClip(w: number, h: number): string {
    const defs = document.createElementNS(SVG_NS, "defs");
    const clip = document.createElementNS(SVG_NS, "clipPath");
    clip.setAttribute("id", "plot-clip");
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(MARGIN.left));
    rect.setAttribute("y", String(MARGIN.top));
    rect.setAttribute("width", String(w));
    rect.setAttribute("height", String(h));
    clip.appendChild(rect);
    defs.appendChild(clip);
    this.svg.appendChild(defs);
    return "plot-clip";
  }

  private drawAxes(w: number, h: number): void {
    const frame = document.createElementNS(SVG_NS, "rect");
    frame.setAttribute("x", String(MARGIN.left));
    frame.setAttribute("y", String(MARGIN.top));
    frame.setAttribute("width", String(w));
    frame.setAttribute("height", String(h));
    frame.setAttribute("class", "plot-frame");
    this.svg.appendChild(frame);

    const xLabel = document.createElementNS(SVG_NS, "text");
    xLabel.setAttribute("x", String(MARGIN.left + w / 2));
    xLabel.setAttribute("y", String(MARGIN.top + h + 26));
    xLabel.setAttribute("class", "axis-label");
    xLabel.textContent = "density anomaly k_p";
    this.svg.appendChild(xLabel);

    const yLabel = document.createElementNS(SVG_NS, "text");
    yLabel.setAttribute("transform", `translate(14 ${MARGIN.top + h / 2}) rotate(-90)`);
    yLabel.setAttribute("class", "axis-label");
    yLabel.textContent = "spatial anomaly k_e";
    this.svg.appendChild(yLabel);
  }

  private drawThresholdLines(w: number, h: number, clip: string): void {
    // t_p cuts the horizontal (density) axis: a vertical draggable rule
    const xPix = this.px(this.thresholds.t_p);
    const vline = document.createElementNS(SVG_NS, "line");
    vline.setAttribute("x1", String(xPix));
    vline.setAttribute("x2", String(xPix));
    vline.setAttribute("y1", String(MARGIN.top));
    vline.setAttribute("y2", String(MARGIN.top + h));
    vline.setAttribute("class", "threshold threshold-v");
    vline.setAttribute("clip-path", `url(#${clip})`);
    vline.addEventListener("pointerdown", (ev) => {
      ev.preventDefault();
      ev.stopPropagation();
      this.dragging = "t_p";
    });
    this.svg.appendChild(vline);

    // t_e cuts the vertical (spatial) axis: a horizontal draggable rule
    const yPix = this.py(this.thresholds.t_e);
    const hline = document.createElementNS(SVG_NS, "line");
    hline.setAttribute("x1", String(MARGIN.left));
    hline.setAttribute("x2", String(MARGIN.left + w));
    hline.setAttribute("y1", String(yPix));
    hline.setAttribute("y2", String(yPix));
    hline.setAttribute("class", "threshold threshold-h");
    hline.setAttribute("clip-path", `url(#${clip})`);
    hline.addEventListener("pointerdown", (ev) => {
      ev.preventDefault();
      ev.stopPropagation();
      this.dragging = "t_e";
    });
    this.svg.appendChild(hline);
  }

  private onPointerDown(ev: PointerEvent): void {
    if (this.dragging === null) {
      this.dragging = "pan";
      this.lastPointer = { x: ev.clientX, y: ev.clientY };
    }
  }

  private onPointerMove(ev: PointerEvent): void {
    if (this.dragging === null) {
      return;
    }
    const rect = this.svg.getBoundingClientRect();
    if (this.dragging === "pan") {
      this.view = this.view.panBy(ev.clientX - this.lastPointer.x, ev.clientY - this.lastPointer.y);
      this.lastPointer = { x: ev.clientX, y: ev.clientY };
      this.render();
      return;
    }
    if (this.dragging === "t_p") {
      const base = this.view.invertX(ev.clientX - rect.left);
      this.thresholds = { ...this.thresholds, t_p: this.xScale.invert(base) };
    } else {
      const base = this.view.invertY(ev.clientY - rect.top);
      this.thresholds = { ...this.thresholds, t_e: this.yScale.invert(base) };
    }
    this.render();
    this.callbacks.onThresholdDrag(this.thresholds);
  }

  private onWheel(ev: WheelEvent): void {
    ev.preventDefault();
    const rect = this.svg.getBoundingClientRect();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    this.view = this.view.zoomAt(factor, ev.clientX - rect.left, ev.clientY - rect.top);
    this.render();
  }
}
