/** Log-log convergence plot (distance vs lattice size) with error bars. */

import { document, tag } from "./svg.js";

export interface ConvergenceEntry {
  n: number;
  ell: number;
  times: number[];
  distance: number[];
  stderr: number[];
}

export interface ConvergenceReport {
  config: Record<string, unknown>;
  per_n: ConvergenceEntry[];
  passed: boolean;
}

export function validateReport(data: unknown, source = "<report>"): ConvergenceReport {
  const rep = data as ConvergenceReport;
  if (!rep || !Array.isArray(rep.per_n) || rep.per_n.length === 0) {
    throw new Error(`${source}: missing per_n entries`);
  }
  for (const entry of rep.per_n) {
    if (!Number.isFinite(entry.n) || entry.n <= 0) {
      throw new Error(`${source}: bad lattice size ${entry.n}`);
    }
    for (const arr of [entry.distance, entry.stderr, entry.times]) {
      if (!Array.isArray(arr) || arr.length === 0 || !arr.every(Number.isFinite)) {
        throw new Error(`${source}: non-finite series for n=${entry.n}`);
      }
    }
    if (entry.distance.some((d) => d <= 0)) {
      throw new Error(`${source}: distances must be positive on a log axis`);
    }
  }
  return rep;
}

const W = 420;
const H = 300;
const MARGIN = { left: 56, right: 16, top: 18, bottom: 40 };

export function renderConvergence(report: ConvergenceReport, timeIndex = 0): string {
  const entries = report.per_n;
  const xs = entries.map((e) => Math.log10(e.n));
  const ys = entries.map((e) => Math.log10(e.distance[timeIndex]));
  const yLo = entries.map((e, i) =>
    Math.log10(Math.max(e.distance[timeIndex] - e.stderr[timeIndex], 1e-12)),
  );
  const yHi = entries.map((e) =>
    Math.log10(e.distance[timeIndex] + e.stderr[timeIndex]),
  );
  const xMin = Math.min(...xs) - 0.1;
  const xMax = Math.max(...xs) + 0.1;
  const yMin = Math.min(...yLo) - 0.15;
  const yMax = Math.max(...yHi) + 0.15;
  const plotW = W - MARGIN.left - MARGIN.right;
  const plotH = H - MARGIN.top - MARGIN.bottom;
  const X = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const Y = (y: number) => MARGIN.top + ((yMax - y) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    tag("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: plotW,
      height: plotH,
      fill: "none",
      stroke: "#444",
    }),
  );
  // connecting polyline
  const points = xs.map((x, i) => `${X(x).toFixed(2)},${Y(ys[i]).toFixed(2)}`);
  parts.push(
    tag("polyline", {
      points: points.join(" "),
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": 1.5,
      class: "distance-line",
    }),
  );
  entries.forEach((e, i) => {
    parts.push(
      tag("line", {
        x1: X(xs[i]),
        x2: X(xs[i]),
        y1: Y(yLo[i]),
        y2: Y(yHi[i]),
        stroke: "#1f77b4",
        class: "error-bar",
      }),
      tag("circle", {
        cx: X(xs[i]),
        cy: Y(ys[i]),
        r: 3.5,
        fill: "#1f77b4",
        class: "marker",
        "data-n": e.n,
        "data-distance": e.distance[timeIndex],
      }),
      tag(
        "text",
        { x: X(xs[i]), y: H - MARGIN.bottom + 16, "font-size": 10, "text-anchor": "middle" },
        String(e.n),
      ),
    );
  });
  parts.push(
    tag(
      "text",
      { x: MARGIN.left + plotW / 2, y: H - 8, "font-size": 11, "text-anchor": "middle" },
      "lattice size N (log)",
    ),
    tag(
      "text",
      {
        x: 14,
        y: MARGIN.top + plotH / 2,
        "font-size": 11,
        "text-anchor": "middle",
        transform: `rotate(-90 14 ${MARGIN.top + plotH / 2})`,
      },
      "L1 distance to reference (log)",
    ),
  );
  return document(W, H, parts.join("\n"));
}
