#!/usr/bin/env node
/**
 * lineardag-plots render --csv results.csv --kind noise-ratio-sweep --out fig.svg
 */
import { readFileSync, writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FIGURE_KINDS, renderFigure, type FigureKind } from "./figures.js";
import { parseResultsCsv, SchemaError } from "./schema.js";

export function render(csvPath: string, kind: FigureKind, outPath: string): void {
  const text = readFileSync(csvPath, "utf8");
  const rows = parseResultsCsv(text); // throws before any file is written
  const svg = renderFigure(kind, rows);
  writeFileSync(outPath, svg, "utf8");
}

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .command(
      "render",
      "render a results CSV into an SVG figure",
      (y) =>
        y
          .option("csv", { type: "string", demandOption: true, describe: "results CSV from lineardag-bench" })
          .option("kind", { type: "string", demandOption: true, choices: FIGURE_KINDS, describe: "figure kind" })
          .option("out", { type: "string", demandOption: true, describe: "output SVG path" }),
      (argv) => {
        try {
          render(argv.csv, argv.kind as FigureKind, argv.out);
          console.log(`wrote ${argv.out}`);
        } catch (err) {
          if (err instanceof SchemaError) {
            console.error(err.message);
          } else {
            console.error(`render failed: ${(err as Error).message}`);
          }
          process.exitCode = 1;
        }
      },
    )
    .demandCommand(1)
    .strict()
    .help()
    .parse();
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  void main();
}
