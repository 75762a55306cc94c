/** Parsing and validation of the rate-table CSV schema (x0,x1,m,ell,value). */

export interface RateTable {
  m: number;
  ell: number;
  size: number;
  /** values[x0 - 1][x1 - 1], both distances 1-based in the file */
  values: number[][];
}

export function parseRateCsv(text: string, source = "<csv>"): RateTable {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: empty CSV`);
  }
  if (lines[0] !== "x0,x1,m,ell,value") {
    throw new Error(`${source}: unexpected header '${lines[0]}'`);
  }
  if (lines.length === 1) {
    throw new Error(`${source}: no data rows`);
  }
  const cells: { x0: number; x1: number; v: number }[] = [];
  let m = NaN;
  let ell = NaN;
  let size = 0;
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 5) {
      throw new Error(`${source}: malformed row '${line}'`);
    }
    const x0 = Number(parts[0]);
    const x1 = Number(parts[1]);
    const rowM = Number(parts[2]);
    const rowEll = Number(parts[3]);
    const v = Number(parts[4]);
    if (![x0, x1, rowM, rowEll, v].every(Number.isFinite)) {
      throw new Error(`${source}: non-finite entry in '${line}'`);
    }
    if (!Number.isInteger(x0) || !Number.isInteger(x1) || x0 < 1 || x1 < 1) {
      throw new Error(`${source}: gap indices must be positive integers`);
    }
    if (Number.isNaN(m)) {
      m = rowM;
      ell = rowEll;
    } else if (rowM !== m || rowEll !== ell) {
      throw new Error(`${source}: mixed m or ell values within one file`);
    }
    size = Math.max(size, x0, x1);
    cells.push({ x0, x1, v });
  }
  const values: number[][] = Array.from({ length: size }, () =>
    Array.from({ length: size }, () => NaN),
  );
  for (const { x0, x1, v } of cells) {
    values[x0 - 1][x1 - 1] = v;
  }
  for (let i = 0; i < size; i++) {
    for (let j = 0; j < size; j++) {
      if (Number.isNaN(values[i][j])) {
        throw new Error(`${source}: missing cell (${i + 1}, ${j + 1})`);
      }
    }
  }
  return { m, ell, size, values };
}
