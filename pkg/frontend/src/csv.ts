/**
 * Strict CSV access on top of papaparse: header + raw string cells.
 * Raw tokens are preserved so dump output can match the file bit-for-bit.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export interface Table {
  header: string[];
  rows: string[][];
}

export class CsvError extends Error {}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  if (text.trim() === "") {
    throw new CsvError(`${path} is empty`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), {
    dynamicTyping: false,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvError(`${path}: malformed CSV (${first.message} at row ${first.row})`);
  }
  const [header, ...rows] = parsed.data;
  if (!header || header.length === 0) {
    throw new CsvError(`${path}: missing header row`);
  }
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new CsvError(
        `${path}: row has ${row.length} fields, header has ${header.length}`);
    }
  }
  return { header, rows };
}

/** Index of a required column. */
export function column(table: Table, name: string, path = "<csv>"): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`${path}: missing required column '${name}'`);
  }
  return idx;
}

/** Parse a numeric cell, rejecting anything non-finite. */
export function numeric(raw: string, what: string): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new CsvError(`${what}: not a finite number: '${raw}'`);
  }
  return value;
}
