import * as fs from "node:fs";
import Papa from "papaparse";

import { ContractError } from "./contracts";

export type Row = Record<string, number | string | null>;

export interface Table {
  columns: string[];
  rows: Row[];
}

/**
 * Read one of the CLI's CSV files: header row, comma separation, optional
 * '#'-prefixed footer comments.
 */
export function readCsv(path: string): Table {
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
    comments: "#",
  });
  const fatal = parsed.errors.filter((e) => e.code !== "TooFewFields");
  if (fatal.length > 0) {
    const first = fatal[0];
    throw new ContractError(`${path}: CSV parse error: ${first.message}`);
  }
  const columns = (parsed.meta.fields ?? []).map((c) => c.trim());
  if (columns.length === 0) {
    throw new ContractError(`${path}: no header row`);
  }
  return { columns, rows: parsed.data };
}

/** Numeric cell access; NaN for missing/non-numeric entries. */
export function num(row: Row, column: string): number {
  const value = row[column];
  return typeof value === "number" && Number.isFinite(value) ? value : NaN;
}
