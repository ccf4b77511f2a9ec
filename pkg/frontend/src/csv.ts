import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Dataset {
  meta: Record<string, string>;
  rows: Record<string, number | string>[];
  columns: string[];
}

export class SchemaError extends Error {}

/** Parse a CSV written by the simulation CLI: `# key = value` header lines,
 *  then a header row and numeric cells. */
export function readCsv(path: string): Dataset {
  const text = readFileSync(path, "utf-8");
  const meta: Record<string, string> = {};
  for (const line of text.split("\n")) {
    if (!line.startsWith("#")) break;
    const eq = line.indexOf("=");
    if (eq > 0) meta[line.slice(1, eq).trim()] = line.slice(eq + 1).trim();
  }
  const body = text
    .split("\n")
    .filter((l) => l.length > 0 && !l.startsWith("#"))
    .join("\n");
  const parsed = Papa.parse<Record<string, number | string>>(body, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`cannot parse ${path}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  return { meta, rows: parsed.data, columns };
}

/** A numeric column, with a schema error naming the column when absent. */
export function numbers(ds: Dataset, column: string, path = "dataset"): number[] {
  if (!ds.columns.includes(column)) {
    throw new SchemaError(`missing column '${column}' in ${path}`);
  }
  return ds.rows.map((r) => Number(r[column]));
}

export function requireColumns(ds: Dataset, cols: string[], path = "dataset"): void {
  for (const c of cols) {
    if (!ds.columns.includes(c)) {
      throw new SchemaError(`missing column '${c}' in ${path}`);
    }
  }
}

export function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}
