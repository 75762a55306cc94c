/** Multi-panel heatmaps of gap-rate tables with one shared color scale. */

import { RateTable } from "./csv.js";
import { document, normalise, rampColor, Scale, tag } from "./svg.js";

const CELL = 6;
const PANEL_PAD = 34;
const LABEL_H = 16;

export interface HeatmapOptions {
  columns?: number;
}

/** Render one panel per table; the color scale spans every panel. */
export function renderHeatmaps(
  tables: RateTable[],
  options: HeatmapOptions = {},
): string {
  if (tables.length === 0) {
    throw new Error("no tables to render");
  }
  const columns = options.columns ?? 3;
  let lo = Infinity;
  let hi = -Infinity;
  for (const t of tables) {
    for (const row of t.values) {
      for (const v of row) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  const scale: Scale = { lo, hi };
  const size = Math.max(...tables.map((t) => t.size));
  const panelW = size * CELL + PANEL_PAD;
  const panelH = size * CELL + PANEL_PAD + LABEL_H;
  const rows = Math.ceil(tables.length / columns);
  const width = columns * panelW + 70;
  const height = rows * panelH + 10;

  const parts: string[] = [];
  tables.forEach((t, idx) => {
    const px = (idx % columns) * panelW + PANEL_PAD;
    const py = Math.floor(idx / columns) * panelH + LABEL_H + 4;
    parts.push(
      tag(
        "text",
        { x: px + (t.size * CELL) / 2, y: py - 6, "font-size": 12, "text-anchor": "middle" },
        `m = ${t.m}`,
      ),
    );
    const cells: string[] = [];
    for (let i = 0; i < t.size; i++) {
      for (let j = 0; j < t.size; j++) {
        const v = t.values[i][j];
        cells.push(
          tag("rect", {
            x: px + i * CELL,
            // larger x1 plotted upward, matching axis orientation
            y: py + (t.size - 1 - j) * CELL,
            width: CELL,
            height: CELL,
            fill: rampColor(normalise(v, scale)),
            "data-m": t.m,
            "data-x0": i + 1,
            "data-x1": j + 1,
            "data-value": v,
          }),
        );
      }
    }
    parts.push(tag("g", { class: `panel panel-m${t.m}` }, cells.join("")));
    parts.push(
      tag(
        "text",
        { x: px + (t.size * CELL) / 2, y: py + t.size * CELL + 12, "font-size": 10, "text-anchor": "middle" },
        "x0",
      ),
      tag(
        "text",
        {
          x: px - 10,
          y: py + (t.size * CELL) / 2,
          "font-size": 10,
          "text-anchor": "middle",
          transform: `rotate(-90 ${px - 10} ${py + (t.size * CELL) / 2})`,
        },
        "x1",
      ),
    );
  });

  // shared colorbar on the right edge
  const barX = columns * panelW + 18;
  const barH = rows * panelH - 60;
  const steps = 64;
  const bar: string[] = [];
  for (let s = 0; s < steps; s++) {
    bar.push(
      tag("rect", {
        x: barX,
        y: 30 + ((steps - 1 - s) * barH) / steps,
        width: 14,
        height: Math.ceil(barH / steps),
        fill: rampColor(s / (steps - 1)),
      }),
    );
  }
  bar.push(
    tag("text", { x: barX + 18, y: 38, "font-size": 10 }, hi.toPrecision(3)),
    tag("text", { x: barX + 18, y: 30 + barH, "font-size": 10 }, lo.toPrecision(3)),
  );
  parts.push(tag("g", { class: "colorbar" }, bar.join("")));

  return document(width, height, parts.join("\n"));
}
