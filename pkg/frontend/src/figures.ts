/** Figure registry: one renderer per experiment kind in the results CSV. */
import { buildRates, buildScatter, buildSeries } from "./aggregate.js";
import { lineChart, rateBars, scatterChart } from "./charts.js";
import type { ResultRow } from "./schema.js";

export type FigureKind =
  | "noise-ratio-sweep"
  | "nv-init-study"
  | "search-strategy"
  | "constraint-study"
  | "threshold-sweep"
  | "sparsity-study"
  | "standardized-ratio"
  | "counterexample"
  | "score-vs-shd";

export const FIGURE_KINDS: FigureKind[] = [
  "noise-ratio-sweep", "nv-init-study", "search-strategy", "constraint-study",
  "threshold-sweep", "sparsity-study", "standardized-ratio", "counterexample",
  "score-vs-shd",
];

function requireSeries(rows: ResultRow[], xKey: keyof ResultRow,
                       metric: keyof ResultRow, seriesKey: keyof ResultRow = "method") {
  const series = buildSeries(rows, xKey, metric, seriesKey);
  if (series.length === 0) {
    throw new Error(`no rows with numeric '${String(xKey)}' and '${String(metric)}'`);
  }
  return series;
}

export function renderFigure(kind: FigureKind, rows: ResultRow[]): string {
  switch (kind) {
    case "noise-ratio-sweep":
      return lineChart(requireSeries(rows, "noise_r", "shd"), {
        title: "Structure error vs noise ratio",
        x: { label: "noise ratio r", log: true },
        y: { label: "SHD (mean +/- se)" },
      });
    case "nv-init-study":
      return lineChart(requireSeries(rows, "noise_r", "shd_cpdag"), {
        title: "Initialization schemes under unequal noise",
        x: { label: "noise ratio r", log: true },
        y: { label: "SHD of CPDAG (mean +/- se)" },
      });
    case "search-strategy":
      return lineChart(requireSeries(rows, "n", "shd_cpdag"), {
        title: "Search strategies vs sample size",
        x: { label: "sample size n", log: true },
        y: { label: "SHD of CPDAG (mean +/- se)" },
      });
    case "constraint-study":
      return lineChart(requireSeries(rows, "n", "shd_cpdag"), {
        title: "Acyclicity constraints vs sample size",
        x: { label: "sample size n", log: true },
        y: { label: "SHD of CPDAG (mean +/- se)" },
      });
    case "threshold-sweep":
      return lineChart(requireSeries(rows, "threshold", "shd"), {
        title: "Effect of the edge-weight threshold",
        x: { label: "threshold" },
        y: { label: "SHD (mean +/- se)" },
      });
    case "sparsity-study":
      return lineChart(requireSeries(rows, "n", "shd"), {
        title: "Sparsity penalties vs sample size",
        x: { label: "sample size n", log: true },
        y: { label: "SHD (mean +/- se)" },
      });
    case "standardized-ratio":
      return lineChart(
        requireSeries(rows, "graph_k", "noise_ratio_standardized", "d"), {
          title: "Noise ratio after standardization",
          x: { label: "edge-count factor k (degree = 2k)" },
          y: { label: "noise ratio r' (mean +/- se)", log: true },
        });
    case "counterexample": {
      const rates = buildRates(rows, "target_match");
      if (rates.length === 0) throw new Error("no counterexample rows");
      return rateBars(rates, {
        title: "Recovery of the predicted wrong structure",
        y: "share of seeds returning the wrong triangle",
      });
    }
    case "score-vs-shd": {
      const points = buildScatter(rows, "score_raw", "shd_cpdag");
      if (points.length === 0) throw new Error("no rows with scores");
      return scatterChart(points, {
        title: "Estimated score vs structural error",
        x: { label: "score before thresholding" },
        y: { label: "SHD of CPDAG" },
      });
    }
    default: {
      const exhaustive: never = kind;
      throw new Error(`unknown figure kind ${String(exhaustive)}`);
    }
  }
}
