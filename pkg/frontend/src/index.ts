export { CSV_COLUMNS, PAIR_COLUMNS, parseSweepCsv } from "./csv.js";
export type { ColumnName, PairName, SweepRow } from "./csv.js";
export { renderSweepPlot } from "./figure.js";
export type { RenderOptions, SweepSeries } from "./figure.js";
