/** Explorer bootstrap: wires the anomaly-space scatter, threshold drags,
 * parameter panel, marks, score list and the 2D auxiliary views to the
 * backend API. The server is the single source of truth for point types. */

import { api, ApiError } from "./api.js";
import { RateLimiter } from "./debounce.js";
import { drawHeatmap } from "./heatmap.js";
import { drawOriginal } from "./original.js";
import { ScatterPlot } from "./scatter.js";
import { GenerationGate, validateParams, withMark } from "./state.js";
import { TYPE_COLORS, TYPE_LABELS } from "./colors.js";
import type { OriginalPoint, OutlierKind, ParamsBody, SpacePayload, Thresholds } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const gate = new GenerationGate();
let space: SpacePayload = { points: [], thresholds: { t_e: 0, t_p: 0 }, types: [] };
let marked = new Set<number>();
let original: OriginalPoint[] | null = null;
let lastAppliedParams: ParamsBody = {};

const scatter = new ScatterPlot($("space-plot") as unknown as SVGSVGElement, {
  onThresholdDrag: (t: Thresholds) => thresholdLimiter.push(t),
  onPointClick: (id: number) => void toggleMark(id),
});

const thresholdLimiter = new RateLimiter<Thresholds>(async (t) => {
  try {
    const resp = await api.classifyByThresholds(t);
    if (gate.accept(resp.generation)) {
      space.types = resp.body.types;
      space.thresholds = resp.body.thresholds;
      renderCounts(resp.body.counts);
      scatter.setTypes(space.types, space.thresholds);
      renderAux();
    }
  } catch (err) {
    toast(`classify failed: ${describe(err)}`);
  }
}, 100);

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

function toast(message: string): void {
  const box = $("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

function renderCounts(counts: Record<OutlierKind, number>): void {
  const host = $("counts");
  host.replaceChildren();
  (Object.keys(TYPE_LABELS) as OutlierKind[]).forEach((kind) => {
    const chip = document.createElement("span");
    chip.className = "count-chip";
    chip.style.borderColor = TYPE_COLORS[kind];
    chip.textContent = `${TYPE_LABELS[kind]}: ${counts[kind] ?? 0}`;
    host.appendChild(chip);
  });
}

function countsFromTypes(types: OutlierKind[]): Record<OutlierKind, number> {
  const counts = { normal: 0, I: 0, II: 0, III: 0 } as Record<OutlierKind, number>;
  for (const t of types) counts[t] += 1;
  return counts;
}

async function refreshSpace(): Promise<void> {
  const resp = await api.space();
  if (!gate.accept(resp.generation)) return;
  space = resp.body;
  scatter.update(space.points, space.types, space.thresholds, marked);
  renderCounts(countsFromTypes(space.types));
  await refreshScores();
  renderAux();
}

async function refreshScores(): Promise<void> {
  const resp = await api.scores();
  if (!gate.accept(resp.generation)) return;
  const scores = resp.body.scores;
  const order = scores
    .map((s, i) => [s, i] as const)
    .sort((a, b) => b[0] - a[0] || a[1] - b[1])
    .slice(0, 12);
  const list = $("score-list");
  list.replaceChildren();
  for (const [s, i] of order) {
    const row = document.createElement("li");
    row.textContent = `#${i}  ${s.toPrecision(6)}`;
    row.style.color = TYPE_COLORS[space.types[i] ?? "normal"];
    list.appendChild(row);
  }
}

function renderAux(): void {
  if (original) {
    drawOriginal($("original-plot") as unknown as SVGSVGElement, original, space.types, marked);
  }
}

async function toggleMark(id: number): Promise<void> {
  const next = !marked.has(id);
  try {
    const resp = await api.mark(id, next);
    marked = new Set(resp.body.marked_ids);
  } catch (err) {
    toast(`mark failed: ${describe(err)}`);
    marked = withMark(marked, id, !next); // keep local view consistent with server
  }
  scatter.setMarked(marked);
  renderAux();
}

function readPanel(): ParamsBody {
  const body: ParamsBody = {
    k: Number(($("param-k") as HTMLInputElement).value),
    w1: Number(($("param-w1") as HTMLInputElement).value),
    w2: Number(($("param-w2") as HTMLInputElement).value),
    mu: Number(($("param-mu") as HTMLInputElement).value),
    agg: ($("param-agg") as HTMLSelectElement).value as ParamsBody["agg"],
  };
  return body;
}

function writePanel(p: ParamsBody): void {
  if (p.k !== undefined) ($("param-k") as HTMLInputElement).value = String(p.k);
  if (p.w1 !== undefined) ($("param-w1") as HTMLInputElement).value = String(p.w1);
  if (p.w2 !== undefined) ($("param-w2") as HTMLInputElement).value = String(p.w2);
  if (p.mu !== undefined) ($("param-mu") as HTMLInputElement).value = String(p.mu);
  if (p.agg !== undefined) ($("param-agg") as HTMLSelectElement).value = p.agg;
}

async function applyParams(): Promise<void> {
  const body = readPanel();
  const problem = validateParams(body);
  if (problem !== null) {
    toast(problem);
    return;
  }
  const button = $("param-apply") as HTMLButtonElement;
  button.disabled = true;
  try {
    const resp = await api.setParams(body);
    gate.accept(resp.generation);
    lastAppliedParams = body;
    await refreshSpace();
    await refreshGrid();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      toast(`refit rejected: ${err.message}`);
      writePanel(lastAppliedParams); // revert sliders to the server's state
    } else {
      toast(`params failed: ${describe(err)}`);
    }
  } finally {
    button.disabled = false;
  }
}

async function applyCount(): Promise<void> {
  const m = Number(($("count-m") as HTMLInputElement).value);
  if (!Number.isInteger(m) || m < 1) {
    toast("m must be an integer >= 1");
    return;
  }
  try {
    const resp = await api.classifyByCount(m);
    if (gate.accept(resp.generation)) {
      space.types = resp.body.types;
      space.thresholds = resp.body.thresholds;
      scatter.setTypes(space.types, space.thresholds);
      renderCounts(resp.body.counts);
      renderAux();
      await refreshScores(); // re-color the list with the new types
    }
  } catch (err) {
    toast(`classify failed: ${describe(err)}`);
  }
}

async function refreshGrid(): Promise<void> {
  const canvas = $("heatmap") as HTMLCanvasElement;
  try {
    const resp = await api.grid(80);
    if (gate.accept(resp.generation)) {
      canvas.classList.remove("hidden");
      drawHeatmap(canvas, resp.body);
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      canvas.classList.add("hidden"); // dataset is not 2D
    }
  }
}

async function boot(): Promise<void> {
  try {
    const marks = await api.marks();
    marked = new Set(marks.body.marked_ids);
    await refreshSpace();
    await refreshGrid();
    try {
      const resp = await api.original();
      original = resp.body.points;
      $("original-wrap").classList.remove("hidden");
      renderAux();
    } catch (err) {
      if (!(err instanceof ApiError && err.status === 404)) throw err;
    }
  } catch (err) {
    toast(`failed to load: ${describe(err)}`);
  }
  $("param-apply").addEventListener("click", () => void applyParams());
  $("count-apply").addEventListener("click", () => void applyCount());
  $("original-toggle").addEventListener("change", (ev) => {
    const on = (ev.target as HTMLInputElement).checked;
    $("original-plot").classList.toggle("hidden", !on);
    if (on) renderAux();
  });
}

void boot();
