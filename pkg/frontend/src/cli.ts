#!/usr/bin/env node
/**
 * cavent-figures render --csv FILE [--csv FILE2 ...] --pair oc_mw
 *                       [--family temperature] [--threshold] --out fig.svg
 *
 * Reads sweep CSVs produced by the simulator and writes one SVG.  Curve
 * labels are the file stems; --family names what distinguishes them.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseArgs } from "node:util";

import { PAIR_COLUMNS, parseSweepCsv, type PairName } from "./csv.js";
import { renderSweepPlot } from "./figure.js";

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        csv: { type: "string", multiple: true },
        pair: { type: "string", default: "oc_mw" },
        family: { type: "string" },
        threshold: { type: "boolean" },
        out: { type: "string" },
      },
    });
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  const { values, positionals } = parsed;

  if (positionals.length !== 1 || positionals[0] !== "render") {
    console.error("usage: cavent-figures render --csv FILE --out FIG.svg " +
                  "[--csv FILE2 ...] [--pair PAIR] [--family NAME] " +
                  "[--threshold]");
    return 1;
  }
  const files = values.csv ?? [];
  if (files.length === 0) {
    console.error("render: at least one --csv is required");
    return 1;
  }
  if (values.out === undefined) {
    console.error("render: --out is required");
    return 1;
  }
  if (!(values.pair! in PAIR_COLUMNS)) {
    console.error(`render: unknown pair ${JSON.stringify(values.pair)}; ` +
                  `choose from ${Object.keys(PAIR_COLUMNS).join(", ")}`);
    return 1;
  }

  let svg: string;
  try {
    const series = files.map((path) => ({
      label: basename(path).replace(/\.csv$/, ""),
      rows: parseSweepCsv(readFileSync(path, "utf8"), path),
    }));
    svg = renderSweepPlot({
      series,
      pair: values.pair as PairName,
      family: values.family,
      // flag only forces it on; the renderer default already draws it
      threshold: values.threshold === true ? true : undefined,
    });
  } catch (err) {
    console.error(`render: ${err instanceof Error ? err.message : err}`);
    return 1;
  }

  writeFileSync(values.out, svg, "utf8");
  console.log(`wrote ${values.out}`);
  return 0;
}

// invoked directly, not imported by tests
if (process.argv[1] !== undefined &&
    import.meta.url === new URL(`file://${process.argv[1]}`).href) {
  process.exit(main(process.argv.slice(2)));
}
