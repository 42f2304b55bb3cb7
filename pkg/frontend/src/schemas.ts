/**
 * Parsers and schemas for the core CLI's CSV/JSON outputs.
 *
 * Every loader throws SchemaError naming the offending file: the figure
 * scripts do no numerics of their own and must fail loudly when the
 * cross-language contract is broken.
 */

import { readFileSync } from "fs";
import { z } from "zod";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

function readText(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch {
    throw new SchemaError(`missing or unreadable input file: ${path}`);
  }
}

/** Split a CSV, skipping `# key=value` metadata lines, enforcing the header. */
function csvRows(path: string, header: string): string[][] {
  const lines = readText(path)
    .split(/\r?\n/)
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length === 0 || lines[0] !== header) {
    throw new SchemaError(
      `${path}: expected header "${header}", got "${lines[0] ?? "<empty>"}"`
    );
  }
  return lines.slice(1).map((line) => line.split(","));
}

function toNumber(path: string, field: string, raw: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${path}: field ${field} is not a finite number: "${raw}"`);
  }
  return value;
}

export interface TrajectoryRow {
  t: number;
  x: number;
  y: number;
  z: number;
}

export function loadTrajectory(path: string): TrajectoryRow[] {
  const rows = csvRows(path, "t,x,y,z").map((fields, i) => {
    if (fields.length !== 4) {
      throw new SchemaError(`${path}: row ${i + 2} has ${fields.length} fields, expected 4`);
    }
    return {
      t: toNumber(path, "t", fields[0]),
      x: toNumber(path, "x", fields[1]),
      y: toNumber(path, "y", fields[2]),
      z: toNumber(path, "z", fields[3]),
    };
  });
  if (rows.length === 0) {
    throw new SchemaError(`${path}: trajectory has no rows`);
  }
  return rows;
}

export interface CrossingRow {
  n: number;
  t: number;
  x: number;
  z: number;
}

export function loadCrossings(path: string): CrossingRow[] {
  return csvRows(path, "n,t,x,z").map((fields, i) => {
    if (fields.length !== 4) {
      throw new SchemaError(`${path}: row ${i + 2} has ${fields.length} fields, expected 4`);
    }
    return {
      n: toNumber(path, "n", fields[0]),
      t: toNumber(path, "t", fields[1]),
      x: toNumber(path, "x", fields[2]),
      z: toNumber(path, "z", fields[3]),
    };
  });
}

export interface ShiftRow {
  t: number;
  a: number;
}

export function loadShift(path: string): ShiftRow[] {
  const rows = csvRows(path, "t,a").map((fields) => ({
    t: toNumber(path, "t", fields[0]),
    a: toNumber(path, "a", fields[1]),
  }));
  if (rows.length === 0) {
    throw new SchemaError(`${path}: shift file has no rows`);
  }
  return rows;
}

export type ScanStatus = "ok" | "no_crossing" | "blowup";

export interface ScanRow {
  r: number;
  eta: number | null;
  nCrossings: number;
  tLast: number | null;
  status: ScanStatus;
}

export function loadScan(path: string): ScanRow[] {
  const rows = csvRows(path, "r,eta,n_crossings,t_last,status").map((fields, i) => {
    if (fields.length !== 5) {
      throw new SchemaError(`${path}: row ${i + 2} has ${fields.length} fields, expected 5`);
    }
    const status = fields[4] as ScanStatus;
    if (status !== "ok" && status !== "no_crossing" && status !== "blowup") {
      throw new SchemaError(`${path}: row ${i + 2} has unknown status "${status}"`);
    }
    const ok = status === "ok";
    return {
      r: toNumber(path, "r", fields[0]),
      eta: ok ? toNumber(path, "eta", fields[1]) : null,
      nCrossings: Math.trunc(toNumber(path, "n_crossings", fields[2])),
      tLast: ok ? toNumber(path, "t_last", fields[3]) : null,
      status,
    };
  });
  if (rows.length === 0) {
    throw new SchemaError(`${path}: scan has no rows`);
  }
  return rows;
}

const orbitSchema = z
  .object({
    gamma: z.tuple([z.number(), z.number()]),
    period: z.number().positive(),
    lambda_s: z.number(),
    lambda_u: z.number(),
    v_s: z.tuple([z.number(), z.number()]),
    v_u: z.tuple([z.number(), z.number()]),
  })
  .passthrough();

export type OrbitReport = z.infer<typeof orbitSchema>;

export function loadOrbitReport(path: string): OrbitReport {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readText(path));
  } catch (err) {
    if (err instanceof SchemaError) throw err;
    throw new SchemaError(`${path}: not valid JSON`);
  }
  const result = orbitSchema.safeParse(parsed);
  if (!result.success) {
    throw new SchemaError(`${path}: invalid orbit report: ${result.error.issues[0]?.message}`);
  }
  return result.data;
}
