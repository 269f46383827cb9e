/** Wire types of the costeff HTTP API (see GET /api/models for ranges). */

export type ModelName = "black-scholes" | "cev";

export interface ParameterSpec {
  description: string;
  default?: number;
  min?: number;
  max?: number;
  min_exclusive?: number;
  max_exclusive?: number;
}

export interface ModelDescriptor {
  name: ModelName;
  parameters: Record<string, ParameterSpec>;
}

export interface ModelsDescriptor {
  service_version: string;
  scenario_cap: number;
  models: ModelDescriptor[];
  alpha: { description: string; min: number; exclude: number[]; default: number };
  defaults: Record<string, number>;
}

export interface CostRequest {
  model: ModelName;
  mu: number;
  sigma: number;
  r: number;
  s0: number;
  horizon_T: number;
  beta?: number;
  n_steps?: number;
  alpha: number;
  mean: number;
  std: number;
  n_periods: number;
  n_scenarios: number;
  seed: number;
}

export interface CostResponse {
  cost: number;
  std_error: number;
  per_period_mean: number;
  seed: number;
  request: CostRequest;
  /** downsampled (kernel, rearranged consumption) pairs, kernel ascending */
  scatter: [number, number][];
}

export interface FrontierRequest {
  model: ModelName;
  mu: number;
  sigma: number;
  r: number;
  s0: number;
  horizon_T: number;
  beta?: number;
  n_steps?: number;
  alpha: number;
  budget: number;
  stds: number[];
  n_periods: number;
  n_scenarios: number;
  seed: number;
}

export interface FrontierPoint {
  target_std: number;
  per_period_mean: number;
  achieved_cost: number;
  budget: number;
  budget_at_horizon: number;
  alpha: number;
  seed: number;
}
