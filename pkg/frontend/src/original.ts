/** Linked original-space scatter for 2D datasets, colored by the same
 * server-assigned types as the anomaly-space view. */

import { colorOf } from "./colors.js";
import { LinearScale, paddedDomain } from "./scale.js";
import type { OriginalPoint, OutlierKind } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PAD = 10;

export function drawOriginal(
  svg: SVGSVGElement,
  points: OriginalPoint[],
  types: OutlierKind[],
  marked: Set<number>,
): void {
  svg.replaceChildren();
  const rect = svg.getBoundingClientRect();
  const xs = new LinearScale(...paddedDomain(points.map((p) => p.x)), PAD, rect.width - PAD);
  const ys = new LinearScale(...paddedDomain(points.map((p) => p.y)), rect.height - PAD, PAD);
  for (const p of points) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(xs.apply(p.x)));
    dot.setAttribute("cy", String(ys.apply(p.y)));
    const kind = types[p.id] ?? "normal";
    dot.setAttribute("r", kind === "normal" ? "2.5" : "4");
    dot.setAttribute("fill", colorOf(kind));
    if (marked.has(p.id)) {
      dot.setAttribute("stroke", "#ffffff");
      dot.setAttribute("stroke-width", "1.5");
    }
    svg.appendChild(dot);
  }
}
