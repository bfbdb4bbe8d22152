/**
 * Strict readers for the simulator's CSV outputs.
 *
 * The files are plain comma-separated text with a fixed header, no
 * quoting, and 9-significant-digit floats, so parsing is a split; all
 * the work here is schema checking with useful diagnostics.
 */

import { readFileSync } from "node:fs";

export const SPEED_COLUMNS = [
  "env", "p", "rho", "gamma", "n", "M", "v_n", "stderr", "aborts", "seed",
] as const;

export const SCALING_COLUMNS = [
  "env", "p", "rho", "gamma", "N", "n", "M", "SD_n", "alpha_n",
  "alpha_star", "symbol", "seed", "log2_nbar",
] as const;

export const HIST_COLUMNS = [
  "env", "p", "rho", "gamma", "N", "alpha", "bin_left", "bin_right", "mass",
] as const;

export const LABEL_COLUMNS = ["env", "rho", "gamma", "label", "seed"] as const;

export class SchemaError extends Error {}

export type Row = Record<string, string>;

/** Read one CSV and check its header against the expected columns. */
export function readTable(path: string, columns: readonly string[]): Row[] {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n");
  if (lines[lines.length - 1] === "") lines.pop();
  const header = (lines[0] ?? "").split(",");
  const missing = columns.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !columns.includes(c));
  if (missing.length > 0 || extra.length > 0) {
    const parts = [`${path}: header does not match expected schema`];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (extra.length > 0) parts.push(`unexpected columns: ${extra.join(", ")}`);
    parts.push(`expected: ${columns.join(",")}`);
    throw new SchemaError(parts.join("; "));
  }
  const rows: Row[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] as string).split(",");
    if (fields.length !== header.length) {
      throw new SchemaError(
        `${path}:${i + 1}: ${fields.length} fields, header has ${header.length}`,
      );
    }
    const row: Row = {};
    for (let j = 0; j < header.length; j++) row[header[j] as string] = fields[j] as string;
    rows.push(row);
  }
  return rows;
}

/** Numeric cell access; empty cells and garbage are hard errors. */
export function num(row: Row, column: string): number {
  const raw = row[column];
  const v = Number(raw);
  if (raw === undefined || raw === "" || !Number.isFinite(v)) {
    throw new SchemaError(`column ${column}: expected a number, got ${JSON.stringify(raw)}`);
  }
  return v;
}

/** Distinct values of a numeric column, ascending. */
export function levels(rows: Row[], column: string): number[] {
  const seen = new Set<number>();
  for (const r of rows) seen.add(num(r, column));
  return [...seen].sort((a, b) => a - b);
}
