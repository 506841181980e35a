/**
 * Result-row schema for the benchmark CSVs produced by `lineardag-bench run`.
 * The renderer never recomputes metrics; it only reads the documented columns.
 */
import Papa from "papaparse";
import { z } from "zod";

export const CSV_COLUMNS = [
  "kind", "d", "graph_k", "alpha", "noise_kind", "noise_r", "n",
  "population", "method", "seed", "threshold",
  "shd", "shd_cpdag", "f1_skeleton", "recall_skeleton", "precision_skeleton",
  "f1_arrows", "f1_dag", "recall_dag", "precision_dag",
  "varsortability", "noise_ratio", "noise_ratio_standardized",
  "score_final", "score_raw", "converged", "n_edges_true", "n_edges_est",
  "exact_match", "target_match", "var_order_ok", "wall_time",
  "failed", "error",
] as const;

const optionalNumber = z
  .string()
  .transform((s) => (s === "" ? null : Number(s)))
  .pipe(z.number().or(z.nan()).nullable());

const optionalBool = z
  .string()
  .transform((s) => (s === "" ? null : s === "true"));

export const resultRowSchema = z.object({
  kind: z.string(),
  d: optionalNumber,
  graph_k: optionalNumber,
  alpha: optionalNumber,
  noise_kind: z.string(),
  noise_r: optionalNumber,
  n: optionalNumber,
  population: optionalBool,
  method: z.string(),
  seed: optionalNumber,
  threshold: optionalNumber,
  shd: optionalNumber,
  shd_cpdag: optionalNumber,
  f1_skeleton: optionalNumber,
  recall_skeleton: optionalNumber,
  precision_skeleton: optionalNumber,
  f1_arrows: optionalNumber,
  f1_dag: optionalNumber,
  recall_dag: optionalNumber,
  precision_dag: optionalNumber,
  varsortability: optionalNumber,
  noise_ratio: optionalNumber,
  noise_ratio_standardized: optionalNumber,
  score_final: optionalNumber,
  score_raw: optionalNumber,
  converged: optionalBool,
  n_edges_true: optionalNumber,
  n_edges_est: optionalNumber,
  exact_match: optionalBool,
  target_match: optionalBool,
  var_order_ok: optionalBool,
  wall_time: optionalNumber,
  failed: optionalBool,
  error: z.string(),
});

export type ResultRow = z.infer<typeof resultRowSchema>;

export class SchemaError extends Error {
  constructor(public missing: string[]) {
    super(`CSV does not match the result-row schema; missing columns: ${missing.join(", ")}`);
    this.name = "SchemaError";
  }
}

/** Parse CSV text; throws SchemaError naming any missing columns. */
export function parseResultsCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse failure: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = CSV_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(missing);
  }
  if (parsed.data.length === 0) {
    throw new Error("CSV contains a header but no result rows");
  }
  return parsed.data.map((raw, i) => {
    const check = resultRowSchema.safeParse(raw);
    if (!check.success) {
      throw new Error(`row ${i + 1} does not match the schema: ${check.error.message}`);
    }
    return check.data;
  });
}
