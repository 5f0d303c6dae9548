/**
 * Parser and validator for the irslab sweep CSV contract.
 *
 * The producer writes a fixed nine-column header; this module accepts
 * exactly that header, requires at least two data rows, and returns the
 * rows as typed records. It never recomputes a statistic — every number
 * is read as-is.
 */

import { parse } from "papaparse";

export const EXPECTED_HEADER = [
  "axis_name",
  "axis_value",
  "mse_empirical",
  "mse_stderr",
  "lower_bound",
  "upper_bound",
  "mse_asymptotic",
  "trials",
  "seed",
] as const;

export interface SweepRow {
  axis_name: string;
  axis_value: number;
  mse_empirical: number;
  mse_stderr: number;
  lower_bound: number;
  upper_bound: number;
  mse_asymptotic: number;
  trials: number;
  seed: number;
}

const NUMERIC_COLUMNS = EXPECTED_HEADER.filter((c) => c !== "axis_name");

/** Raised for any way the input fails the CSV contract. */
export class CsvFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvFormatError";
  }
}

/**
 * Parse sweep CSV text into rows.
 *
 * Enforces: the exact expected header (missing and unexpected columns are
 * each named in the error), at least two data rows, finite numbers in every
 * numeric column, and a single axis_name shared by all rows.
 */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });

  const header = parsed.meta.fields ?? [];
  const missing = EXPECTED_HEADER.filter((c) => !header.includes(c));
  const unexpected = header.filter(
    (c) => !(EXPECTED_HEADER as readonly string[]).includes(c),
  );
  if (missing.length > 0 || unexpected.length > 0) {
    const parts: string[] = [];
    if (missing.length > 0) parts.push(`missing column(s): ${missing.join(", ")}`);
    if (unexpected.length > 0)
      parts.push(`unexpected column(s): ${unexpected.join(", ")}`);
    throw new CsvFormatError(parts.join("; "));
  }

  const rows: SweepRow[] = parsed.data.map((raw, i) => {
    const row: Partial<SweepRow> = { axis_name: raw.axis_name };
    for (const col of NUMERIC_COLUMNS) {
      const value = Number(raw[col]);
      if (raw[col] === "" || raw[col] === undefined || !Number.isFinite(value)) {
        throw new CsvFormatError(
          `row ${i + 1}: column ${col} is not a finite number (got ${JSON.stringify(raw[col])})`,
        );
      }
      (row as Record<string, unknown>)[col] = value;
    }
    return row as SweepRow;
  });

  if (rows.length < 2) {
    throw new CsvFormatError(`need at least 2 data rows, got ${rows.length}`);
  }

  const axes = new Set(rows.map((r) => r.axis_name));
  if (axes.size > 1) {
    throw new CsvFormatError(
      `rows mix axis_name values: ${[...axes].sort().join(", ")}`,
    );
  }

  return rows;
}
