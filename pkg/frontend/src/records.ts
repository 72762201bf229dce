/**
 * Record-file readers for the governability CSV schema.
 *
 * The figure layer never recomputes science: it consumes the columns the
 * analysis side wrote. Schema checks are strict so a renamed or missing
 * column fails loudly instead of producing an empty plot.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export interface PhaseRecord {
  index: number;
  p: number;
  lambdaHat: number | null;
  cMinSize: number | null;
  horizon: number | null;
  deficit: number;
  classification: string;
}

export interface ThetaRecord {
  theta: number;
  lambdaHat: number;
  budget: number;
  deficit: number;
  classification: string;
}

const PHASE_COLUMNS = [
  "index",
  "lambda_hat",
  "c_min_size",
  "horizon",
  "deficit",
  "classification",
];

const THETA_COLUMNS = ["theta", "lambda_hat", "budget", "deficit", "classification"];

function parseCsv(text: string, required: string[], what: string): Record<string, string>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${what}: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((column) => !fields.includes(column));
  if (missing.length > 0) {
    throw new SchemaError(
      `${what}: missing column(s) ${missing.map((c) => `'${c}'`).join(", ")}`
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${what}: no data rows`);
  }
  return parsed.data;
}

function toNumber(raw: string, column: string, what: string): number {
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`${what}: non-numeric value '${raw}' in column '${column}'`);
  }
  return value;
}

function toOptionalNumber(raw: string | undefined, column: string, what: string): number | null {
  if (raw === undefined || raw === "") {
    return null;
  }
  return toNumber(raw, column, what);
}

export function parsePhaseRecords(text: string): PhaseRecord[] {
  const rows = parseCsv(text, PHASE_COLUMNS, "phase records");
  return rows.map((row) => ({
    index: toNumber(row.index, "index", "phase records"),
    p: toOptionalNumber(row.p, "p", "phase records") ?? 0,
    lambdaHat: toOptionalNumber(row.lambda_hat, "lambda_hat", "phase records"),
    cMinSize: toOptionalNumber(row.c_min_size, "c_min_size", "phase records"),
    horizon: toOptionalNumber(row.horizon, "horizon", "phase records"),
    deficit: toNumber(row.deficit, "deficit", "phase records"),
    classification: row.classification,
  }));
}

export function parseThetaRecords(text: string): ThetaRecord[] {
  const rows = parseCsv(text, THETA_COLUMNS, "theta records");
  return rows.map((row) => ({
    theta: toNumber(row.theta, "theta", "theta records"),
    lambdaHat: toNumber(row.lambda_hat, "lambda_hat", "theta records"),
    budget: toNumber(row.budget, "budget", "theta records"),
    deficit: toNumber(row.deficit, "deficit", "theta records"),
    classification: row.classification,
  }));
}
