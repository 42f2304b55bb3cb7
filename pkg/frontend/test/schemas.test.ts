import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import {
  loadCrossings,
  loadOrbitReport,
  loadScan,
  loadShift,
  loadTrajectory,
  SchemaError,
} from "../src/schemas";

const dir = mkdtempSync(join(tmpdir(), "ratetip-fig-"));

function file(name: string, content: string): string {
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("trajectory parsing", () => {
  it("accepts the documented header", () => {
    const path = file("t.csv", "t,x,y,z\n0,1,2,3\n0.5,1.5,2.5,3.5\n");
    const rows = loadTrajectory(path);
    expect(rows).toHaveLength(2);
    expect(rows[1]).toEqual({ t: 0.5, x: 1.5, y: 2.5, z: 3.5 });
  });

  it("rejects a wrong header, naming the file", () => {
    const path = file("bad.csv", "time,x,y,z\n0,1,2,3\n");
    expect(() => loadTrajectory(path)).toThrowError(SchemaError);
    expect(() => loadTrajectory(path)).toThrowError(/bad\.csv/);
  });

  it("rejects non-numeric fields", () => {
    const path = file("nan.csv", "t,x,y,z\n0,oops,2,3\n");
    expect(() => loadTrajectory(path)).toThrowError(/not a finite number/);
  });

  it("rejects an empty trajectory", () => {
    const path = file("empty.csv", "t,x,y,z\n");
    expect(() => loadTrajectory(path)).toThrowError(/no rows/);
  });

  it("names missing files", () => {
    expect(() => loadTrajectory(join(dir, "nope.csv"))).toThrowError(/nope\.csv/);
  });
});

describe("crossings and shift parsing", () => {
  it("parses crossings and allows zero rows", () => {
    const path = file("c.csv", "n,t,x,z\n");
    expect(loadCrossings(path)).toEqual([]);
  });

  it("parses shift curves", () => {
    const path = file("s.csv", "t,a\n-1,-0.2\n1,0.2\n");
    expect(loadShift(path)).toHaveLength(2);
  });
});

describe("scan parsing", () => {
  it("skips metadata comments and keeps row order", () => {
    const path = file(
      "scan.csv",
      "# T=150\n# mode=unstable_coefficient\nr,eta,n_crossings,t_last,status\n" +
        "0.9,0.1,22,144.2,ok\n0.905,nan,0,nan,no_crossing\n0.91,-0.2,22,144.1,ok\n"
    );
    const rows = loadScan(path);
    expect(rows).toHaveLength(3);
    expect(rows[0].eta).toBeCloseTo(0.1);
    expect(rows[1].eta).toBeNull();
    expect(rows[1].status).toBe("no_crossing");
    expect(rows[2].eta).toBeCloseTo(-0.2);
  });

  it("rejects unknown status values", () => {
    const path = file(
      "badscan.csv",
      "r,eta,n_crossings,t_last,status\n0.9,0.1,22,144.2,maybe\n"
    );
    expect(() => loadScan(path)).toThrowError(/unknown status/);
  });
});

describe("orbit report parsing", () => {
  const good = {
    gamma: [-5.24, 0.0176],
    period: 5.88,
    lambda_s: -1.3e-14,
    lambda_u: -2.4,
    v_s: [0.05, 0.99],
    v_u: [0.99, 0.002],
  };

  it("accepts the documented schema plus extra keys", () => {
    const path = file("upo.json", JSON.stringify({ ...good, residual: 1e-12 }));
    expect(loadOrbitReport(path).gamma[0]).toBeCloseTo(-5.24);
  });

  it("rejects structurally broken reports", () => {
    const path = file("upo-bad.json", JSON.stringify({ ...good, gamma: [1] }));
    expect(() => loadOrbitReport(path)).toThrowError(SchemaError);
  });

  it("rejects non-JSON", () => {
    const path = file("upo-nojson.json", "definitely not json");
    expect(() => loadOrbitReport(path)).toThrowError(/not valid JSON/);
  });
});
