/** Render model for the cost panel: affordability against the budget, the
 *  Monte Carlo error, the kernel-vs-consumption scatter, and a comparison
 *  with the previous submission. Numbers pass through untransformed; only
 *  display formatting happens here. */

import type { CostResponse } from "./types.js";

export interface ScatterView {
  /** SVG path of the (kernel, rearranged sum) cloud, display-scaled */
  path: string;
  width: number;
  height: number;
  pointCount: number;
}

export interface CostPanelModel {
  cost: number;
  costText: string;
  stdErrorText: string;
  budget: number;
  affordable: boolean;
  headline: string;
  alphaText: string;
  meanStdText: string;
  scatter: ScatterView;
  comparison?: {
    cost: number;
    costText: string;
    alphaText: string;
    meanStdText: string;
    deltaText: string;
  };
}

const fmt = (x: number, digits = 2) =>
  x.toLocaleString("en-US", { minimumFractionDigits: digits, maximumFractionDigits: digits });

export function scatterView(
  scatter: [number, number][],
  width = 420,
  height = 220,
): ScatterView {
  if (scatter.length === 0) return { path: "", width, height, pointCount: 0 };
  const xs = scatter.map((p) => p[0]);
  const ys = scatter.map((p) => p[1]);
  const xMin = Math.min(...xs), xMax = Math.max(...xs);
  const yMin = Math.min(...ys), yMax = Math.max(...ys);
  const sx = (x: number) => (xMax === xMin ? width / 2 : ((x - xMin) / (xMax - xMin)) * (width - 12) + 6);
  const sy = (y: number) => (yMax === yMin ? height / 2 : height - (((y - yMin) / (yMax - yMin)) * (height - 12) + 6));
  const path = scatter
    .map(([x, y]) => `M${sx(x).toFixed(1)},${sy(y).toFixed(1)}h0`)
    .join("");
  return { path, width, height, pointCount: scatter.length };
}

export function buildCostPanel(
  current: CostResponse,
  budget: number,
  previous?: CostResponse,
): CostPanelModel {
  const affordable = current.cost <= budget;
  const model: CostPanelModel = {
    cost: current.cost,
    costText: fmt(current.cost),
    stdErrorText: `± ${fmt(current.std_error, 2)}`,
    budget,
    affordable,
    headline: affordable
      ? `affordable: cost ${fmt(current.cost)} ≤ budget ${fmt(budget)}`
      : `over budget: cost ${fmt(current.cost)} > budget ${fmt(budget)}`,
    alphaText: `alpha ${current.request.alpha}`,
    meanStdText: `mean ${fmt(current.request.mean, 0)} / std ${fmt(current.request.std, 0)}`,
    scatter: scatterView(current.scatter),
  };
  if (previous) {
    const delta = current.cost - previous.cost;
    model.comparison = {
      cost: previous.cost,
      costText: fmt(previous.cost),
      alphaText: `alpha ${previous.request.alpha}`,
      meanStdText: `mean ${fmt(previous.request.mean, 0)} / std ${fmt(previous.request.std, 0)}`,
      deltaText: `${delta >= 0 ? "+" : ""}${fmt(delta)} vs previous`,
    };
  }
  return model;
}

export function renderCostPanelHtml(m: CostPanelModel): string {
  const cls = m.affordable ? "affordable" : "over-budget";
  const comparison = m.comparison
    ? `<div class="compare">previous: <b>${m.comparison.costText}</b> ` +
      `(${m.comparison.alphaText}, ${m.comparison.meanStdText}) ` +
      `<span class="delta">${m.comparison.deltaText}</span></div>`
    : "";
  return (
    `<div class="cost-panel ${cls}">` +
    `<div class="headline">${m.headline}</div>` +
    `<div class="figures">cost <b data-role="cost-value">${m.costText}</b> ` +
    `<span class="se">${m.stdErrorText}</span> (${m.alphaText}, ${m.meanStdText})</div>` +
    comparison +
    `<svg viewBox="0 0 ${m.scatter.width} ${m.scatter.height}" class="scatter" role="img">` +
    `<path d="${m.scatter.path}" stroke="currentColor" stroke-width="2" stroke-linecap="round"/>` +
    `</svg>` +
    `<div class="scatter-caption">${m.scatter.pointCount} scenario ranks: cheap states (left) fund the largest consumption</div>` +
    `</div>`
  );
}
