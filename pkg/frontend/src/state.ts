/** Client state: current controls, the last two cost submissions for
 *  side-by-side comparison, and accumulating frontier series. The client
 *  computes nothing numerical itself; it only arranges service responses. */

import type { CostRequest, CostResponse, FrontierPoint } from "./types.js";

export interface FrontierSeries {
  alpha: number;
  seed: number;
  points: FrontierPoint[];
  complete: boolean;
  warning?: string;
}

export interface BuilderState {
  request: CostRequest;
  budget: number;
  /** newest first; at most two entries are kept for comparison */
  submissions: CostResponse[];
  frontiers: FrontierSeries[];
}

export function defaultRequest(): CostRequest {
  return {
    model: "black-scholes",
    mu: 0.03,
    sigma: 0.3,
    r: 0.02,
    s0: 1.0,
    horizon_T: 10.0,
    beta: -0.25,
    n_steps: 1000,
    alpha: 20.0,
    mean: 100.0,
    std: 40.0,
    n_periods: 10,
    n_scenarios: 20000,
    seed: 1,
  };
}

export function initialState(): BuilderState {
  return { request: defaultRequest(), budget: 1000.0, submissions: [], frontiers: [] };
}

/** Record a completed submission; the previous one stays for comparison. */
export function recordSubmission(state: BuilderState, resp: CostResponse): BuilderState {
  return { ...state, submissions: [resp, ...state.submissions].slice(0, 2) };
}

export function startFrontierSeries(state: BuilderState, alpha: number, seed: number): BuilderState {
  const series: FrontierSeries = { alpha, seed, points: [], complete: false };
  return { ...state, frontiers: [...state.frontiers, series] };
}

/** Append a streamed point to its (alpha, seed) series, keeping std order. */
export function addFrontierPoint(state: BuilderState, point: FrontierPoint): BuilderState {
  const frontiers = state.frontiers.map((s) => {
    if (s.alpha !== point.alpha || s.seed !== point.seed) return s;
    const points = [...s.points, point].sort((a, b) => a.target_std - b.target_std);
    return { ...s, points };
  });
  return { ...state, frontiers };
}

export function finishFrontierSeries(
  state: BuilderState,
  alpha: number,
  seed: number,
  warning?: string,
): BuilderState {
  const frontiers = state.frontiers.map((s) =>
    s.alpha === alpha && s.seed === seed ? { ...s, complete: true, warning } : s,
  );
  return { ...state, frontiers };
}

/** Same-seed replays must reproduce a completed series point for point. */
export function seriesMatches(existing: FrontierSeries, replay: FrontierPoint[]): boolean {
  if (existing.points.length !== replay.length) return false;
  return existing.points.every((p, i) => {
    const q = replay[i];
    return (
      p.target_std === q.target_std &&
      p.per_period_mean === q.per_period_mean &&
      p.achieved_cost === q.achieved_cost
    );
  });
}
