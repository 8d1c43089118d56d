/** Payload shapes of the backend JSON API. */

export type OutlierKind = "normal" | "I" | "II" | "III";

export interface SpacePoint {
  id: number;
  k_e: number;
  k_p: number;
}

export interface Thresholds {
  t_e: number;
  t_p: number;
}

export interface SpacePayload {
  points: SpacePoint[];
  thresholds: Thresholds;
  types: OutlierKind[];
}

export interface ClassifyPayload {
  types: OutlierKind[];
  counts: Record<OutlierKind, number>;
  thresholds: Thresholds;
}

export interface ScoresPayload {
  scores: number[];
}

export interface GridPayload {
  xmin: number;
  xmax: number;
  ymin: number;
  ymax: number;
  resolution: number;
  values: number[][];
}

export interface OriginalPoint {
  id: number;
  x: number;
  y: number;
}

export interface OriginalPayload {
  points: OriginalPoint[];
}

export interface MarksPayload {
  marked_ids: number[];
}

export interface ParamsBody {
  k?: number;
  w1?: number;
  w2?: number;
  mu?: number;
  agg?: "max" | "mean" | "median";
}
