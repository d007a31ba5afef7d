/**
 * Extract plottable series from the two CSV schemas.
 *
 * Each point keeps the raw CSV tokens alongside the parsed numbers;
 * --dump-series emits the raw tokens, so the dump equals the input
 * values bit-for-bit.
 */

import { CsvError, Table, column, numeric, readTable } from "./csv";

export interface Point {
  x: number;
  y: number;
  lo?: number;
  hi?: number;
  raw: { x: string; y: string; lo?: string; hi?: string };
}

export interface Series {
  name: string;
  points: Point[];
}

function groupBy(rows: string[][], key: (row: string[]) => string): Map<string, string[][]> {
  const groups = new Map<string, string[][]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}

/**
 * Convergence traces: columns iter + sum_secrecy_bits, one series per
 * scheme when a scheme column is present (single unnamed series otherwise).
 */
export function convergenceSeries(path: string): Series[] {
  const table = readTable(path);
  const iterCol = column(table, "iter", path);
  const yCol = column(table, "sum_secrecy_bits", path);
  const schemeCol = table.header.indexOf("scheme");
  const groups = schemeCol >= 0
    ? groupBy(table.rows, (row) => row[schemeCol])
    : new Map([["trace", table.rows]]);
  const series: Series[] = [];
  for (const [name, rows] of groups) {
    const points = rows.map((row) => ({
      x: numeric(row[iterCol], `${path}:iter`),
      y: numeric(row[yCol], `${path}:sum_secrecy_bits`),
      raw: { x: row[iterCol], y: row[yCol] },
    }));
    points.sort((a, b) => a.x - b.x);
    series.push({ name, points });
  }
  if (series.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return series;
}

/**
 * Sweep summaries: mean with its 95% interval per scheme versus the sweep
 * value. An explicit axis filters mixed files; otherwise the file must be
 * single-axis.
 */
export function sweepSeries(path: string, axis?: string): { axis: string; series: Series[] } {
  const table = readTable(path);
  const schemeCol = column(table, "scheme", path);
  const axisCol = column(table, "sweep_axis", path);
  const xCol = column(table, "sweep_value", path);
  const yCol = column(table, "mean_sum_secrecy_bits", path);
  const loCol = column(table, "ci95_lo", path);
  const hiCol = column(table, "ci95_hi", path);

  const axes = new Set(table.rows.map((row) => row[axisCol]));
  const wanted = axis ?? (axes.size === 1 ? [...axes][0] : undefined);
  if (wanted === undefined) {
    throw new CsvError(
      `${path}: multiple sweep axes (${[...axes].join(", ")}); pass --axis`);
  }
  if (!axes.has(wanted)) {
    throw new CsvError(`${path}: no rows for axis '${wanted}'`);
  }
  const rows = table.rows.filter((row) => row[axisCol] === wanted);
  const series: Series[] = [];
  for (const [name, group] of groupBy(rows, (row) => row[schemeCol])) {
    const points = group.map((row) => ({
      x: numeric(row[xCol], `${path}:sweep_value`),
      y: numeric(row[yCol], `${path}:mean_sum_secrecy_bits`),
      lo: numeric(row[loCol], `${path}:ci95_lo`),
      hi: numeric(row[hiCol], `${path}:ci95_hi`),
      raw: { x: row[xCol], y: row[yCol], lo: row[loCol], hi: row[hiCol] },
    }));
    points.sort((a, b) => a.x - b.x);
    series.push({ name, points });
  }
  if (series.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return { axis: wanted, series };
}

/** Raw-token dump of the plotted series, for byte-exact diffing. */
export function dumpSeries(series: Series[]): string {
  const out = series.map((s) => ({
    name: s.name,
    points: s.points.map((p) => p.raw),
  }));
  return JSON.stringify(out, null, 2);
}
