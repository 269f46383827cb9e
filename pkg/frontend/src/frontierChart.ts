/** Progressive frontier chart: one polyline per (alpha, seed) series,
 *  points appearing as the stream delivers them, hover resolving to the
 *  nearest std. Pure functions from series to SVG fragments. */

import type { FrontierSeries } from "./state.js";

export interface ChartGeometry {
  width: number;
  height: number;
  padding: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function chartGeometry(series: FrontierSeries[], width = 520, height = 300): ChartGeometry {
  const pts = series.flatMap((s) => s.points);
  const xs = pts.map((p) => p.target_std);
  const ys = pts.map((p) => p.per_period_mean);
  const pad = 36;
  const xMin = xs.length ? Math.min(...xs) : 0;
  const xMax = xs.length ? Math.max(...xs) : 1;
  const yMin = ys.length ? Math.min(...ys) : 0;
  const yMax = ys.length ? Math.max(...ys) : 1;
  const spread = (lo: number, hi: number): [number, number] =>
    lo === hi ? [lo - 1, hi + 1] : [lo, hi];
  const [x0, x1] = spread(xMin, xMax);
  const [y0, y1] = spread(yMin, yMax);
  return { width, height, padding: pad, xMin: x0, xMax: x1, yMin: y0, yMax: y1 };
}

export function toCanvas(g: ChartGeometry, std: number, mean: number): [number, number] {
  const x = g.padding + ((std - g.xMin) / (g.xMax - g.xMin)) * (g.width - 2 * g.padding);
  const y = g.height - g.padding - ((mean - g.yMin) / (g.yMax - g.yMin)) * (g.height - 2 * g.padding);
  return [x, y];
}

/** Polyline vertices "x1,y1 x2,y2 ..." for one series (points std-ordered). */
export function seriesPolyline(g: ChartGeometry, s: FrontierSeries): string {
  return s.points
    .map((p) => toCanvas(g, p.target_std, p.per_period_mean))
    .map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`)
    .join(" ");
}

/** Nearest point of any series to a canvas x position, for hover labels. */
export function hoverLookup(
  g: ChartGeometry,
  series: FrontierSeries[],
  canvasX: number,
): { alpha: number; target_std: number; per_period_mean: number } | null {
  let best: { alpha: number; target_std: number; per_period_mean: number } | null = null;
  let bestDist = Infinity;
  for (const s of series) {
    for (const p of s.points) {
      const [x] = toCanvas(g, p.target_std, p.per_period_mean);
      const d = Math.abs(x - canvasX);
      if (d < bestDist) {
        bestDist = d;
        best = { alpha: s.alpha, target_std: p.target_std, per_period_mean: p.per_period_mean };
      }
    }
  }
  return best;
}

const SERIES_COLORS = ["#2563eb", "#dc2626", "#059669", "#d97706"];

export function renderFrontierSvg(series: FrontierSeries[], width = 520, height = 300): string {
  const g = chartGeometry(series, width, height);
  const lines = series
    .map((s, i) => {
      const pts = seriesPolyline(g, s);
      const color = SERIES_COLORS[i % SERIES_COLORS.length];
      const dash = s.complete ? "" : ` stroke-dasharray="4 3"`;
      return (
        `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="2"${dash}/>` +
        `<text x="${width - g.padding}" y="${16 + 14 * i}" fill="${color}" text-anchor="end" ` +
        `font-size="12">alpha ${s.alpha}${s.complete ? "" : " (loading)"}</text>`
      );
    })
    .join("");
  const axis =
    `<line x1="${g.padding}" y1="${height - g.padding}" x2="${width - g.padding}" ` +
    `y2="${height - g.padding}" stroke="#888"/>` +
    `<line x1="${g.padding}" y1="${g.padding}" x2="${g.padding}" ` +
    `y2="${height - g.padding}" stroke="#888"/>` +
    `<text x="${width / 2}" y="${height - 6}" font-size="11" fill="#555" text-anchor="middle">target std</text>` +
    `<text x="12" y="${height / 2}" font-size="11" fill="#555" transform="rotate(-90 12 ${height / 2})" ` +
    `text-anchor="middle">expected consumption per period</text>`;
  return `<svg viewBox="0 0 ${width} ${height}" class="frontier-chart">${axis}${lines}</svg>`;
}
