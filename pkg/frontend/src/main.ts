/** DOM wiring: controls bound to descriptor ranges, one in-flight cost
 *  request and one frontier stream at a time (a new submission aborts the
 *  previous), inline validation messages gating the submit buttons. */

import { ApiError, getModels, postCost, streamFrontier } from "./api.js";
import { buildCostPanel, renderCostPanelHtml } from "./costPanel.js";
import { renderFrontierSvg } from "./frontierChart.js";
import {
  addFrontierPoint,
  finishFrontierSeries,
  initialState,
  recordSubmission,
  startFrontierSeries,
} from "./state.js";
import type { BuilderState } from "./state.js";
import type { FrontierRequest, ModelsDescriptor } from "./types.js";
import { validateCostRequest } from "./validation.js";

const BASE_URL = (window as { COSTEFF_API?: string }).COSTEFF_API ?? "http://127.0.0.1:8000";

let state: BuilderState = initialState();
let descriptor: ModelsDescriptor | null = null;
let costAbort: AbortController | null = null;
let frontierAbort: AbortController | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const CONTROL_IDS = [
  "model", "mu", "sigma", "r", "s0", "horizon_T", "beta",
  "alpha", "mean", "std", "n_periods", "n_scenarios", "seed", "budget",
] as const;

function readControls(): void {
  const read = (id: string) => parseFloat(($(id) as unknown as HTMLInputElement).value);
  state.request = {
    ...state.request,
    model: (($("model") as unknown as HTMLSelectElement).value as "black-scholes" | "cev"),
    mu: read("mu"),
    sigma: read("sigma"),
    r: read("r"),
    s0: read("s0"),
    horizon_T: read("horizon_T"),
    beta: read("beta"),
    alpha: read("alpha"),
    mean: read("mean"),
    std: read("std"),
    n_periods: Math.round(read("n_periods")),
    n_scenarios: Math.round(read("n_scenarios")),
    seed: Math.round(read("seed")),
  };
  state.budget = read("budget");
}

function refreshValidation(): void {
  if (!descriptor) return;
  readControls();
  const errors = validateCostRequest(state.request, descriptor);
  const box = $("validation");
  box.innerHTML = errors.map((e) => `<div class="field-error">${e.field}: ${e.message}</div>`).join("");
  const blocked = errors.length > 0;
  ($("submit-cost") as HTMLButtonElement).disabled = blocked;
  ($("run-frontier") as HTMLButtonElement).disabled = blocked;
}

function renderPanels(): void {
  const [current, previous] = state.submissions;
  $("cost-panel").innerHTML = current
    ? renderCostPanelHtml(buildCostPanel(current, state.budget, previous))
    : `<div class="placeholder">submit to price the plan</div>`;
  $("frontier-panel").innerHTML = state.frontiers.length
    ? renderFrontierSvg(state.frontiers)
    : `<div class="placeholder">no frontier series yet</div>`;
  const warnings = state.frontiers.filter((s) => s.warning).map((s) => `alpha ${s.alpha}: ${s.warning}`);
  $("frontier-warnings").innerHTML = warnings.map((w) => `<div class="warning">${w}</div>`).join("");
}

async function submitCost(): Promise<void> {
  if (!descriptor) return;
  readControls();
  costAbort?.abort();
  costAbort = new AbortController();
  $("status").textContent = "pricing…";
  try {
    const resp = await postCost(BASE_URL, state.request, costAbort.signal);
    state = recordSubmission(state, resp);
    $("status").textContent = "";
    renderPanels();
  } catch (err) {
    if ((err as Error).name === "AbortError") return;
    const detail = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
    $("status").textContent = `request failed (${detail})`;
  }
}

async function runFrontier(): Promise<void> {
  if (!descriptor) return;
  readControls();
  frontierAbort?.abort();
  frontierAbort = new AbortController();
  const req: FrontierRequest = {
    model: state.request.model,
    mu: state.request.mu,
    sigma: state.request.sigma,
    r: state.request.r,
    s0: state.request.s0,
    horizon_T: state.request.horizon_T,
    beta: state.request.beta,
    n_steps: state.request.n_steps,
    alpha: state.request.alpha,
    budget: state.budget,
    stds: [10, 20, 30, 40, 50, 60, 70, 80],
    n_periods: state.request.n_periods,
    n_scenarios: state.request.n_scenarios,
    seed: state.request.seed,
  };
  state = startFrontierSeries(state, req.alpha, req.seed);
  renderPanels();
  try {
    await streamFrontier(
      BASE_URL,
      req,
      (point) => {
        state = addFrontierPoint(state, point);
        renderPanels();
      },
      frontierAbort.signal,
    );
    state = finishFrontierSeries(state, req.alpha, req.seed);
  } catch (err) {
    if ((err as Error).name !== "AbortError") {
      // partial stream: keep what arrived, surface the interruption
      state = finishFrontierSeries(state, req.alpha, req.seed, `stream interrupted (${String(err)})`);
    }
  }
  renderPanels();
}

async function boot(): Promise<void> {
  try {
    descriptor = await getModels(BASE_URL);
  } catch (err) {
    $("status").textContent = `cannot reach the service at ${BASE_URL} (${String(err)})`;
    return;
  }
  $("status").textContent = "";
  for (const id of CONTROL_IDS) {
    $(id).addEventListener("input", refreshValidation);
  }
  $("submit-cost").addEventListener("click", () => void submitCost());
  $("run-frontier").addEventListener("click", () => void runFrontier());
  $("cancel-frontier").addEventListener("click", () => frontierAbort?.abort());
  refreshValidation();
  renderPanels();
}

void boot();
