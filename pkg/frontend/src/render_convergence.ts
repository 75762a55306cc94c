/** CLI: read a convergence report JSON (--in), write a log-log SVG (--out). */

import { readFileSync, writeFileSync } from "node:fs";
import { renderConvergence, validateReport } from "./convergence.js";

function parseArgs(argv: string[]): { inFile: string; out: string } {
  let inFile = "";
  let out = "";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") inFile = argv[++i];
    else if (argv[i] === "--out") out = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  if (!inFile || !out) throw new Error("usage: render_convergence --in <report.json> --out <file.svg>");
  return { inFile, out };
}

export function main(argv: string[]): number {
  try {
    const { inFile, out } = parseArgs(argv);
    const report = validateReport(JSON.parse(readFileSync(inFile, "utf8")), inFile);
    writeFileSync(out, renderConvergence(report));
    console.log(`wrote ${out} (${report.per_n.length} lattice sizes)`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("render_convergence.js")) {
  process.exit(main(process.argv.slice(2)));
}
