/**
 * Strict reader for sweep CSVs.
 *
 * The producer guarantees UTF-8, LF line endings, a fixed header, %.17g
 * floats, booleans as true/false and NA for fields that do not exist at a
 * row.  Nothing is ever quoted, so splitting on commas is exact; anything
 * that deviates from the contract is a hard error, not a guess.
 */

export const CSV_COLUMNS = [
  "axis_value",
  "stable",
  "spectral_abscissa",
  "q1_re",
  "q1_im",
  "alpha1_abs",
  "alpha2_abs",
  "beta_abs",
  "two_eta_mr_oc",
  "two_eta_mr_mw",
  "two_eta_mr_oc2",
  "two_eta_oc_mw",
  "two_eta_oc_oc2",
  "two_eta_oc2_mw",
  "logneg_oc_mw",
  "lyap_residual",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export const PAIR_COLUMNS = {
  mr_oc: "two_eta_mr_oc",
  mr_mw: "two_eta_mr_mw",
  mr_oc2: "two_eta_mr_oc2",
  oc_mw: "two_eta_oc_mw",
  oc_oc2: "two_eta_oc_oc2",
  oc2_mw: "two_eta_oc2_mw",
} as const;

export type PairName = keyof typeof PAIR_COLUMNS;

export interface SweepRow {
  axis_value: number;
  stable: boolean | null;
  spectral_abscissa: number | null;
  q1_re: number | null;
  q1_im: number | null;
  alpha1_abs: number | null;
  alpha2_abs: number | null;
  beta_abs: number | null;
  two_eta_mr_oc: number | null;
  two_eta_mr_mw: number | null;
  two_eta_mr_oc2: number | null;
  two_eta_oc_mw: number | null;
  two_eta_oc_oc2: number | null;
  two_eta_oc2_mw: number | null;
  logneg_oc_mw: number | null;
  lyap_residual: number | null;
}

function fail(source: string, line: number, msg: string): never {
  throw new Error(`${source}:${line}: ${msg}`);
}

function parseNumber(
  field: string, source: string, line: number, col: string,
): number | null {
  if (field === "NA") return null;
  const v = Number(field);
  if (field === "" || !Number.isFinite(v)) {
    fail(source, line, `${col}: not a finite number: ${JSON.stringify(field)}`);
  }
  return v;
}

/** Parse a whole sweep CSV document.  `source` only decorates errors. */
export function parseSweepCsv(text: string, source = "<csv>"): SweepRow[] {
  if (text.includes("\r")) {
    fail(source, 1, "carriage return found; the contract is LF only");
  }
  const lines = text.split("\n");
  if (lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) fail(source, 1, "empty document");

  const header = lines[0]!;
  if (header !== CSV_COLUMNS.join(",")) {
    fail(source, 1, `unexpected header: ${JSON.stringify(header)}`);
  }

  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const lineNo = i + 1;
    const fields = lines[i]!.split(",");
    if (fields.length !== CSV_COLUMNS.length) {
      fail(source, lineNo,
           `expected ${CSV_COLUMNS.length} fields, got ${fields.length}`);
    }
    const axis = parseNumber(fields[0]!, source, lineNo, "axis_value");
    if (axis === null) fail(source, lineNo, "axis_value may not be NA");

    let stable: boolean | null;
    const s = fields[1]!;
    if (s === "true") stable = true;
    else if (s === "false") stable = false;
    else if (s === "NA") stable = null;
    else fail(source, lineNo, `stable: expected true/false/NA, got ${s}`);

    const row = { axis_value: axis, stable } as SweepRow;
    for (let c = 2; c < CSV_COLUMNS.length; c++) {
      const name = CSV_COLUMNS[c]! as Exclude<ColumnName, "axis_value" | "stable">;
      row[name] = parseNumber(fields[c]!, source, lineNo, name);
    }
    rows.push(row);
  }
  return rows;
}
