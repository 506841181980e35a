/**
 * Minimal SVG chart writer: error-bar line charts, scatter plots, and rate
 * bars.  No DOM dependency; output is a standalone SVG string.
 */
import type { ScatterPoint, Series } from "./aggregate.js";

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 64 };
const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

export interface AxisOptions {
  label: string;
  log?: boolean;
}

export interface ChartOptions {
  title: string;
  x: AxisOptions;
  y: AxisOptions;
}

type Scale = (value: number) => number;

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function makeScale(
  domain: [number, number],
  range: [number, number],
  log: boolean,
): { scale: Scale; ticks: number[] } {
  let [lo, hi] = domain;
  if (log) {
    lo = Math.max(lo, Number.MIN_VALUE);
    hi = Math.max(hi, lo * 10);
    const llo = Math.log10(lo);
    const lhi = Math.log10(hi);
    const scale = (v: number) =>
      range[0] +
      ((Math.log10(Math.max(v, Number.MIN_VALUE)) - llo) / (lhi - llo)) *
        (range[1] - range[0]);
    const ticks: number[] = [];
    for (let e = Math.floor(llo); e <= Math.ceil(lhi); e++) ticks.push(10 ** e);
    return { scale, ticks };
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const scale = (v: number) => range[0] + ((v - lo) / (hi - lo)) * (range[1] - range[0]);
  const step = niceStep(hi - lo);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push(Number(t.toPrecision(10)));
  }
  return { scale, ticks };
}

function niceStep(span: number): number {
  const raw = span / 6;
  const mag = 10 ** Math.floor(Math.log10(raw));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-2)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return Number(v.toPrecision(4)).toString();
}

function frame(opts: ChartOptions, xs: { scale: Scale; ticks: number[] },
               ys: { scale: Scale; ticks: number[] }): string[] {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(`<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">${esc(opts.title)}</text>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`);
  for (const t of xs.ticks) {
    const px = xs.scale(t);
    if (px < x0 - 1 || px > x1 + 1) continue;
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(`<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`);
  }
  for (const t of ys.ticks) {
    const py = ys.scale(t);
    if (py > y0 + 1 || py < y1 - 1) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#eee"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmtTick(t)}</text>`);
  }
  parts.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">${esc(opts.x.label)}</text>`);
  parts.push(`<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(opts.y.label)}</text>`);
  return parts;
}

function legend(labels: string[]): string[] {
  const parts: string[] = [];
  labels.forEach((label, i) => {
    const y = MARGIN.top + 6 + i * 16;
    const x = WIDTH - MARGIN.right - 180;
    const color = PALETTE[i % PALETTE.length];
    parts.push(`<line x1="${x}" y1="${y}" x2="${x + 18}" y2="${y}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${x + 24}" y="${y + 4}" font-size="11">${esc(label)}</text>`);
  });
  return parts;
}

function document(parts: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...parts,
    "</svg>",
  ].join("\n");
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

/** Multi-series line chart with +/- one standard-error bars. */
export function lineChart(series: Series[], opts: ChartOptions): string {
  const allX = series.flatMap((s) => s.points.map((p) => p.x));
  const allY = series.flatMap((s) =>
    s.points.flatMap((p) => [p.mean - p.se, p.mean + p.se]));
  if (allX.length === 0) throw new Error("no plottable points");
  const xs = makeScale(extent(allX), [MARGIN.left, WIDTH - MARGIN.right], !!opts.x.log);
  const ys = makeScale(
    opts.y.log ? extent(allY.filter((v) => v > 0)) : extent([...allY, 0]),
    [HEIGHT - MARGIN.bottom, MARGIN.top], !!opts.y.log);
  const parts = frame(opts, xs, ys);
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const path = s.points
      .map((p, k) => `${k === 0 ? "M" : "L"}${xs.scale(p.x).toFixed(1)},${ys.scale(p.mean).toFixed(1)}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const p of s.points) {
      const px = xs.scale(p.x);
      const lo = ys.scale(opts.y.log ? Math.max(p.mean - p.se, Number.MIN_VALUE) : p.mean - p.se);
      const hi = ys.scale(p.mean + p.se);
      parts.push(`<line x1="${px}" y1="${lo}" x2="${px}" y2="${hi}" stroke="${color}" stroke-width="1"/>`);
      parts.push(`<line x1="${px - 3}" y1="${lo}" x2="${px + 3}" y2="${lo}" stroke="${color}"/>`);
      parts.push(`<line x1="${px - 3}" y1="${hi}" x2="${px + 3}" y2="${hi}" stroke="${color}"/>`);
      parts.push(`<circle cx="${px}" cy="${ys.scale(p.mean)}" r="3" fill="${color}"/>`);
    }
  });
  parts.push(...legend(series.map((s) => s.label)));
  return document(parts);
}

/** Scatter plot colored by series label. */
export function scatterChart(points: ScatterPoint[], opts: ChartOptions): string {
  if (points.length === 0) throw new Error("no plottable points");
  const labels = [...new Set(points.map((p) => p.label))].sort();
  const xs = makeScale(extent(points.map((p) => p.x)),
                       [MARGIN.left, WIDTH - MARGIN.right], !!opts.x.log);
  const ys = makeScale(extent(points.map((p) => p.y)),
                       [HEIGHT - MARGIN.bottom, MARGIN.top], !!opts.y.log);
  const parts = frame(opts, xs, ys);
  for (const p of points) {
    const color = PALETTE[labels.indexOf(p.label) % PALETTE.length];
    parts.push(`<circle cx="${xs.scale(p.x).toFixed(1)}" cy="${ys.scale(p.y).toFixed(1)}" r="3.5" fill="${color}" fill-opacity="0.55"/>`);
  }
  parts.push(...legend(labels));
  return document(parts);
}

/** Horizontal-category bar chart for per-method rates in [0, 1]. */
export function rateBars(
  rates: { label: string; rate: number; n: number }[],
  opts: { title: string; y: string },
): string {
  if (rates.length === 0) throw new Error("no plottable points");
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const parts: string[] = [];
  parts.push(`<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">${esc(opts.title)}</text>`);
  const band = (x1 - x0) / rates.length;
  const yscale = (v: number) => y0 - v * (y0 - y1);
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const py = yscale(frac);
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#eee"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${frac}</text>`);
  }
  rates.forEach((r, i) => {
    const bx = x0 + i * band + band * 0.15;
    const bw = band * 0.7;
    const by = yscale(r.rate);
    parts.push(`<rect x="${bx}" y="${by}" width="${bw}" height="${y0 - by}" fill="${PALETTE[i % PALETTE.length]}" fill-opacity="0.8"/>`);
    parts.push(`<text x="${bx + bw / 2}" y="${by - 6}" text-anchor="middle" font-size="11">${(100 * r.rate).toFixed(0)}% (n=${r.n})</text>`);
    parts.push(`<text x="${bx + bw / 2}" y="${y0 + 16}" text-anchor="middle" font-size="10">${esc(r.label.slice(0, 26))}</text>`);
  });
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`);
  parts.push(`<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(opts.y)}</text>`);
  return document(parts);
}
