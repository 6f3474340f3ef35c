import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { parseSweepCsv, type SweepRow } from "../src/csv.js";
import { renderSweepPlot } from "../src/figure.js";

const FIXTURE = fileURLToPath(
  new URL("./fixtures/detuning_sys1.csv", import.meta.url));
const ROWS = parseSweepCsv(readFileSync(FIXTURE, "utf8"), "fixture");

// Geometry constants of the renderer; the inverse x map below relies on them.
const WIDTH = 720;
const MARGIN_LEFT = 64;
const MARGIN_RIGHT = 20;

/** Row with only the fields the renderer looks at. */
function row(axis: number, eta: number | null): SweepRow {
  return {
    axis_value: axis, stable: eta === null ? null : true,
    spectral_abscissa: null, q1_re: null, q1_im: null, alpha1_abs: null,
    alpha2_abs: null, beta_abs: null, two_eta_mr_oc: null, two_eta_mr_mw: null,
    two_eta_mr_oc2: null, two_eta_oc_mw: eta, two_eta_oc_oc2: null,
    two_eta_oc2_mw: null, logneg_oc_mw: null, lyap_residual: null,
  };
}

function curvePoints(svg: string): Array<{ x: number; y: number }> {
  const pts: Array<{ x: number; y: number }> = [];
  for (const path of svg.matchAll(/<path class="curve[^"]*" d="([^"]*)"/g)) {
    for (const m of path[1]!.matchAll(/[ML]([\d.]+),([\d.]+)/g)) {
      pts.push({ x: Number(m[1]), y: Number(m[2]) });
    }
  }
  for (const c of svg.matchAll(
      /<circle class="curve[^"]*" cx="([\d.]+)" cy="([\d.]+)"/g)) {
    pts.push({ x: Number(c[1]), y: Number(c[2]) });
  }
  return pts.sort((a, b) => a.x - b.x);
}

function thresholdY(svg: string): number {
  const m = svg.match(/<line class="threshold"[^>]* y1="([\d.]+)"/);
  expect(m).not.toBeNull();
  return Number(m![1]);
}

describe("criterion 10: sweep figure", () => {
  const svg = renderSweepPlot({
    series: [{ label: "sys1", rows: ROWS }],
    pair: "oc_mw",
    xLabel: "detuning / omega_m",
  });

  it("is a single-curve svg with the separability boundary", () => {
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg).toContain('class="curve curve-0"');
    expect(svg).not.toContain("curve-1");
    expect(svg).toContain('class="threshold"');
  });

  it("dips below the boundary exactly at the two entangled windows", () => {
    const t = thresholdY(svg);
    const pts = curvePoints(svg);
    expect(pts.length).toBeGreaterThan(300);

    // group consecutive below-boundary vertices into runs (sub-pixel
    // boundary hugging does not count as a dip)
    const runs: Array<{ lo: number; hi: number }> = [];
    let cur: { lo: number; hi: number } | null = null;
    for (const p of pts) {
      if (p.y > t + 0.5) {
        if (cur === null) cur = { lo: p.x, hi: p.x };
        else cur.hi = p.x;
      } else if (cur !== null) {
        runs.push(cur);
        cur = null;
      }
    }
    if (cur !== null) runs.push(cur);
    expect(runs).toHaveLength(2);

    // map pixel x back to the detuning axis and check the window locations
    const lo = ROWS[0]!.axis_value;
    const hi = ROWS[ROWS.length - 1]!.axis_value;
    const plotW = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    const toAxis = (X: number) => lo + ((X - MARGIN_LEFT) / plotW) * (hi - lo);
    const windows = runs.map((r) => [toAxis(r.lo), toAxis(r.hi)]);
    expect(windows[0]![0]).toBeGreaterThan(-1.05);
    expect(windows[0]![1]).toBeLessThan(-0.85);
    expect(windows[1]![0]).toBeGreaterThan(-0.3);
    expect(windows[1]![1]).toBeLessThan(-0.15);
  });

  it("re-renders byte-identically", () => {
    const again = renderSweepPlot({
      series: [{ label: "sys1", rows: ROWS }],
      pair: "oc_mw",
      xLabel: "detuning / omega_m",
    });
    expect(again).toBe(svg);
  });
});

describe("gap handling", () => {
  it("breaks the curve at rows without a verdict", () => {
    const rows = [row(0, 1.1), row(1, 1.0), row(2, null), row(3, 0.9),
                  row(4, 0.95)];
    const svg = renderSweepPlot({ series: [{ label: "s", rows }],
                                  pair: "oc_mw" });
    const paths = [...svg.matchAll(/<path class="curve curve-0"/g)];
    expect(paths).toHaveLength(2);
  });

  it("draws an isolated point as a marker", () => {
    const rows = [row(0, null), row(1, 0.9), row(2, null), row(3, 1.1),
                  row(4, 1.2)];
    const svg = renderSweepPlot({ series: [{ label: "s", rows }],
                                  pair: "oc_mw" });
    expect(svg).toContain("<circle class=\"curve curve-0\"");
    expect([...svg.matchAll(/<path class="curve curve-0"/g)]).toHaveLength(1);
  });

  it("refuses a series with no values at all", () => {
    expect(() => renderSweepPlot({
      series: [{ label: "s", rows: [row(0, null)] }], pair: "oc_mw",
    })).toThrow(/no finite/);
  });
});

describe("render options", () => {
  it("labels multiple series and the family", () => {
    const a = { label: "T=0.1K", rows: [row(0, 1.2), row(1, 0.9)] };
    const b = { label: "T=0.12K", rows: [row(0, 1.3), row(1, 0.95)] };
    const svg = renderSweepPlot({ series: [a, b], pair: "oc_mw",
                                  family: "temperature" });
    expect(svg).toContain("curve-0");
    expect(svg).toContain("curve-1");
    expect(svg).toContain(">temperature</text>");
    expect(svg).toContain(">T=0.1K</text>");
    expect(svg).toContain(">T=0.12K</text>");
  });

  it("omits the boundary when asked", () => {
    const svg = renderSweepPlot({
      series: [{ label: "s", rows: [row(0, 1.2), row(1, 0.9)] }],
      pair: "oc_mw", threshold: false,
    });
    expect(svg).not.toContain("threshold");
  });

  it("pulls the boundary into view even when the data sit away from it", () => {
    const svg = renderSweepPlot({
      series: [{ label: "s", rows: [row(0, 42.0), row(1, 43.0)] }],
      pair: "oc_mw",
    });
    expect(svg).toContain('class="threshold"');
  });

  it("rejects unknown pairs and empty input", () => {
    expect(() => renderSweepPlot({ series: [], pair: "oc_mw" }))
      .toThrow(/no series/);
    expect(() => renderSweepPlot({
      series: [{ label: "s", rows: [row(0, 1.0)] }],
      pair: "bogus" as never,
    })).toThrow(/unknown pair/);
  });

  it("escapes markup in labels", () => {
    const svg = renderSweepPlot({
      series: [{ label: "a<b>&c", rows: [row(0, 1.0), row(1, 1.1)] }],
      pair: "oc_mw", family: "x",
    });
    expect(svg).toContain("a&lt;b&gt;&amp;c");
  });
});
