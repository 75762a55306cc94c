/** Minimal SVG assembly and a fixed sequential color ramp. */

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  body = "",
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(" ");
  return body === ""
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${body}</${name}>`;
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">\n${body}\n</svg>\n`
  );
}

/** Five-stop dark-to-bright ramp, linearly interpolated on [0, 1]. */
const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function rampColor(t: number): string {
  if (!Number.isFinite(t)) {
    throw new Error(`color ramp got non-finite value ${t}`);
  }
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(scaled));
  const frac = scaled - i;
  const rgb = STOPS[i].map((a, c) => Math.round(a + frac * (STOPS[i + 1][c] - a)));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

export interface Scale {
  lo: number;
  hi: number;
}

export function normalise(v: number, scale: Scale): number {
  if (scale.hi === scale.lo) {
    return 0.5;
  }
  return (v - scale.lo) / (scale.hi - scale.lo);
}
