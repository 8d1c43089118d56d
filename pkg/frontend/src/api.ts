/** Thin typed client for the backend; surfaces the generation header. */

import type {
  ClassifyPayload,
  GridPayload,
  MarksPayload,
  OriginalPayload,
  ParamsBody,
  ScoresPayload,
  SpacePayload,
  Thresholds,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface Stamped<T> {
  body: T;
  generation: number;
}

async function request<T>(method: string, path: string, body?: unknown): Promise<Stamped<T>> {
  const resp = await fetch(path, {
    method,
    headers: body === undefined ? undefined : { "Content-Type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const generation = Number(resp.headers.get("X-Biknn-Generation") ?? "0");
  const doc = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const detail = (doc as { error?: string }).error ?? resp.statusText;
    throw new ApiError(resp.status, detail);
  }
  return { body: doc as T, generation };
}

export const api = {
  space: () => request<SpacePayload>("GET", "/api/space"),
  scores: () => request<ScoresPayload>("GET", "/api/scores"),
  grid: (resolution: number) => request<GridPayload>("GET", `/api/grid?resolution=${resolution}`),
  original: () => request<OriginalPayload>("GET", "/api/original"),
  marks: () => request<MarksPayload>("GET", "/api/marks"),
  classifyByCount: (m: number) => request<ClassifyPayload>("POST", "/api/classify", { m }),
  classifyByThresholds: (t: Thresholds) => request<ClassifyPayload>("POST", "/api/classify", t),
  setParams: (p: ParamsBody) => request<{ generation: number }>("POST", "/api/params", p),
  mark: (id: number, marked: boolean) => request<MarksPayload>("POST", "/api/mark", { id, marked }),
};
