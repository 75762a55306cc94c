/** CLI: read every rates_m*.csv in --in, write one multi-panel SVG to --out. */

import { readdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { parseRateCsv, RateTable } from "./csv.js";
import { renderHeatmaps } from "./heatmap.js";

function parseArgs(argv: string[]): { inDir: string; out: string } {
  let inDir = "";
  let out = "";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") inDir = argv[++i];
    else if (argv[i] === "--out") out = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  if (!inDir || !out) throw new Error("usage: render_heatmaps --in <dir> --out <file.svg>");
  return { inDir, out };
}

export function main(argv: string[]): number {
  try {
    const { inDir, out } = parseArgs(argv);
    const files = readdirSync(inDir)
      .filter((f) => /^rates_m.*\.csv$/.test(f))
      .sort((a, b) => {
        const ma = Number(a.replace("rates_m", "").replace(".csv", ""));
        const mb = Number(b.replace("rates_m", "").replace(".csv", ""));
        return ma - mb;
      });
    if (files.length === 0) {
      throw new Error(`no rates_m*.csv files in ${inDir}`);
    }
    const tables: RateTable[] = files.map((f) =>
      parseRateCsv(readFileSync(join(inDir, f), "utf8"), f),
    );
    const svg = renderHeatmaps(tables);
    writeFileSync(out, svg);
    console.log(`wrote ${out} (${tables.length} panels)`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("render_heatmaps.js")) {
  process.exit(main(process.argv.slice(2)));
}
