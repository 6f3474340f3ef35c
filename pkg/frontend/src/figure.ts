/**
 * Deterministic SVG rendering of entanglement sweeps.
 *
 * One curve per input series, gaps where a row has no verdict (failed or
 * unstable points), optional dashed reference line at the separability
 * boundary 2 eta = 1.  The output is a pure function of the inputs: no
 * timestamps, no randomness, fixed formatting, so re-rendering the same
 * data is byte-identical.
 */

import { PAIR_COLUMNS, type PairName, type SweepRow } from "./csv.js";

export interface SweepSeries {
  label: string;
  rows: SweepRow[];
}

export interface RenderOptions {
  series: SweepSeries[];
  pair: PairName;
  /** Legend heading naming what distinguishes the series, e.g. "temperature". */
  family?: string;
  /** Draw the 2 eta = 1 boundary (default on). */
  threshold?: boolean;
  width?: number;
  height?: number;
  xLabel?: string;
}

const PAIR_LABEL: Record<PairName, string> = {
  mr_oc: "MR-OC", mr_mw: "MR-MW", mr_oc2: "MR-OC2",
  oc_mw: "OC-MW", oc_oc2: "OC-OC2", oc2_mw: "OC2-MW",
};

// Okabe-Ito, safe for color-blind readers
const PALETTE = ["#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00",
                 "#56b4e9"];

const MARGIN = { top: 24, right: 20, bottom: 46, left: 64 };

function px(v: number): string {
  // 2 decimals is below visual resolution and keeps the output stable
  return v.toFixed(2);
}

function tickLabel(v: number): string {
  const cleaned = Number(v.toPrecision(12));
  return Object.is(cleaned, -0) ? "0" : String(cleaned);
}

/** Step size giving 4-8 ticks over a span: 1/2/5 times a power of ten. */
function tickStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r >= 5) return 5 * mag;
  if (r >= 2) return 2 * mag;
  return mag;
}

function ticks(lo: number, hi: number): number[] {
  const step = tickStep(hi - lo);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface Pt {
  x: number;
  y: number;
}

/** Consecutive rows with a value for the pair; NA rows break the run. */
function segments(rows: SweepRow[], col: keyof SweepRow): Pt[][] {
  const segs: Pt[][] = [];
  let cur: Pt[] = [];
  for (const row of rows) {
    const v = row[col];
    if (typeof v === "number") {
      cur.push({ x: row.axis_value, y: v });
    } else if (cur.length > 0) {
      segs.push(cur);
      cur = [];
    }
  }
  if (cur.length > 0) segs.push(cur);
  return segs;
}

export function renderSweepPlot(opts: RenderOptions): string {
  if (opts.series.length === 0) {
    throw new Error("nothing to plot: no series given");
  }
  const col = PAIR_COLUMNS[opts.pair];
  if (col === undefined) {
    throw new Error(`unknown pair ${JSON.stringify(opts.pair)}`);
  }
  const width = opts.width ?? 720;
  const height = opts.height ?? 440;
  const drawThreshold = opts.threshold ?? true;

  const allSegs = opts.series.map((s) => segments(s.rows, col));
  const pts = allSegs.flat(2);
  if (pts.length === 0) {
    throw new Error(`no finite ${col} values in any series`);
  }

  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const p of pts) {
    if (p.x < xLo) xLo = p.x;
    if (p.x > xHi) xHi = p.x;
    if (p.y < yLo) yLo = p.y;
    if (p.y > yHi) yHi = p.y;
  }
  if (drawThreshold) {
    yLo = Math.min(yLo, 1);
    yHi = Math.max(yHi, 1);
  }
  if (xHi === xLo) { xLo -= 0.5; xHi += 0.5; }
  const yPad = (yHi - yLo || 1) * 0.06;
  yLo -= yPad;
  yHi += yPad;

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => MARGIN.top + ((yHi - y) / (yHi - yLo)) * plotH;

  const out: string[] = [];
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
           `height="${height}" viewBox="0 0 ${width} ${height}" ` +
           `font-family="sans-serif" font-size="12">`);
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // axes and grid
  for (const t of ticks(xLo, xHi)) {
    const X = px(sx(t));
    out.push(`<line class="grid" x1="${X}" y1="${px(MARGIN.top)}" ` +
             `x2="${X}" y2="${px(MARGIN.top + plotH)}" stroke="#dddddd"/>`);
    out.push(`<text class="tick" x="${X}" y="${px(MARGIN.top + plotH + 18)}" ` +
             `text-anchor="middle">${tickLabel(t)}</text>`);
  }
  for (const t of ticks(yLo, yHi)) {
    const Y = px(sy(t));
    out.push(`<line class="grid" x1="${px(MARGIN.left)}" y1="${Y}" ` +
             `x2="${px(MARGIN.left + plotW)}" y2="${Y}" stroke="#dddddd"/>`);
    out.push(`<text class="tick" x="${px(MARGIN.left - 8)}" y="${Y}" ` +
             `text-anchor="end" dominant-baseline="middle">` +
             `${tickLabel(t)}</text>`);
  }
  out.push(`<rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" ` +
           `width="${px(plotW)}" height="${px(plotH)}" fill="none" ` +
           `stroke="#333333"/>`);

  if (drawThreshold && 1 >= yLo && 1 <= yHi) {
    const Y = px(sy(1));
    out.push(`<line class="threshold" x1="${px(MARGIN.left)}" y1="${Y}" ` +
             `x2="${px(MARGIN.left + plotW)}" y2="${Y}" stroke="#888888" ` +
             `stroke-dasharray="6 4"/>`);
  }

  opts.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    for (const seg of allSegs[i]!) {
      if (seg.length === 1) {
        // lone survivor between gaps: a marker, a path would be invisible
        const p = seg[0]!;
        out.push(`<circle class="curve curve-${i}" cx="${px(sx(p.x))}" ` +
                 `cy="${px(sy(p.y))}" r="2.5" fill="${color}"/>`);
        continue;
      }
      const d = seg.map((p, k) =>
        `${k === 0 ? "M" : "L"}${px(sx(p.x))},${px(sy(p.y))}`).join("");
      out.push(`<path class="curve curve-${i}" d="${d}" fill="none" ` +
               `stroke="${color}" stroke-width="1.5"/>`);
    }
  });

  // labels
  const midX = px(MARGIN.left + plotW / 2);
  out.push(`<text class="xlabel" x="${midX}" y="${px(height - 10)}" ` +
           `text-anchor="middle">${esc(opts.xLabel ?? "axis value")}</text>`);
  out.push(`<text class="ylabel" x="16" y="${px(MARGIN.top + plotH / 2)}" ` +
           `text-anchor="middle" transform="rotate(-90 16 ` +
           `${px(MARGIN.top + plotH / 2)})">2η ` +
           `${PAIR_LABEL[opts.pair]}</text>`);

  if (opts.series.length > 1 || opts.family !== undefined) {
    let ly = MARGIN.top + 14;
    const lx = MARGIN.left + plotW - 150;
    if (opts.family !== undefined) {
      out.push(`<text class="legend-title" x="${px(lx)}" y="${px(ly)}" ` +
               `font-weight="bold">${esc(opts.family)}</text>`);
      ly += 16;
    }
    opts.series.forEach((series, i) => {
      const color = PALETTE[i % PALETTE.length]!;
      out.push(`<line x1="${px(lx)}" y1="${px(ly - 4)}" x2="${px(lx + 22)}" ` +
               `y2="${px(ly - 4)}" stroke="${color}" stroke-width="1.5"/>`);
      out.push(`<text class="legend" x="${px(lx + 28)}" y="${px(ly)}">` +
               `${esc(series.label)}</text>`);
      ly += 16;
    });
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
