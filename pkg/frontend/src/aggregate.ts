/** Grouped means with standard errors over seeds, mirroring the harness. */
import type { ResultRow } from "./schema.js";

export interface SeriesPoint {
  x: number;
  mean: number;
  se: number;
  n: number;
}

export interface Series {
  label: string;
  points: SeriesPoint[];
}

function meanSe(values: number[]): { mean: number; se: number; n: number } {
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  if (n < 2) return { mean, se: 0, n };
  const variance =
    values.reduce((a, b) => a + (b - mean) ** 2, 0) / (n - 1);
  return { mean, se: Math.sqrt(variance / n), n };
}

export function usable(rows: ResultRow[]): ResultRow[] {
  return rows.filter((r) => !r.failed);
}

/**
 * One series per value of `seriesKey` (usually the method label); points are
 * means +/- standard error of `metric` over seeds at each value of `xKey`.
 */
export function buildSeries(
  rows: ResultRow[],
  xKey: keyof ResultRow,
  metric: keyof ResultRow,
  seriesKey: keyof ResultRow = "method",
): Series[] {
  const groups = new Map<string, Map<number, number[]>>();
  for (const row of usable(rows)) {
    const x = row[xKey];
    const y = row[metric];
    if (typeof x !== "number" || typeof y !== "number" || !isFinite(y)) continue;
    const label = String(row[seriesKey]);
    if (!groups.has(label)) groups.set(label, new Map());
    const byX = groups.get(label)!;
    if (!byX.has(x)) byX.set(x, []);
    byX.get(x)!.push(y);
  }
  const series: Series[] = [];
  for (const [label, byX] of [...groups.entries()].sort()) {
    const points = [...byX.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, values]) => ({ x, ...meanSe(values) }));
    series.push({ label, points });
  }
  return series;
}

export interface ScatterPoint {
  x: number;
  y: number;
  label: string;
}

export function buildScatter(
  rows: ResultRow[],
  xKey: keyof ResultRow,
  yKey: keyof ResultRow,
): ScatterPoint[] {
  const out: ScatterPoint[] = [];
  for (const row of usable(rows)) {
    const x = row[xKey];
    const y = row[yKey];
    if (typeof x === "number" && typeof y === "number" && isFinite(x) && isFinite(y)) {
      out.push({ x, y, label: row.method });
    }
  }
  return out;
}

/** Share of true values of a boolean column per method. */
export function buildRates(
  rows: ResultRow[],
  flag: keyof ResultRow,
): { label: string; rate: number; n: number }[] {
  const groups = new Map<string, { hit: number; n: number }>();
  for (const row of usable(rows)) {
    const value = row[flag];
    if (typeof value !== "boolean") continue;
    const g = groups.get(row.method) ?? { hit: 0, n: 0 };
    g.hit += value ? 1 : 0;
    g.n += 1;
    groups.set(row.method, g);
  }
  return [...groups.entries()]
    .sort()
    .map(([label, g]) => ({ label, rate: g.hit / g.n, n: g.n }));
}
