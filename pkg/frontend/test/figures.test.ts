import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { FIGURES } from "../src/figures";
import { main, parseArgs } from "../src/cli";
import { loadScan, SchemaError } from "../src/schemas";

const FIX = join(__dirname, "..", "fixtures");
const out = mkdtempSync(join(tmpdir(), "ratetip-svg-"));

const INPUTS: Record<string, string[]> = {
  attractor3d: [join(FIX, "attractor_trajectory.csv"), join(FIX, "orbit.csv")],
  return_map: [join(FIX, "attractor_crossings.csv"), join(FIX, "upo.json")],
  shift_profiles: [join(FIX, "shift_tanh.csv"), join(FIX, "shift_piecewise.csv")],
  etop_connection: [
    join(FIX, "etop_trajectory.csv"),
    join(FIX, "etop_crossings.csv"),
    join(FIX, "upo.json"),
  ],
  eta_curves: [125, 135, 145, 155].map((T) => join(FIX, `scan_T${T}.csv`)),
};

describe.each(Object.keys(FIGURES))("figure %s", (name) => {
  it("renders an SVG from the CLI fixtures", () => {
    const target = join(out, `${name}.svg`);
    FIGURES[name](INPUTS[name], target);
    expect(existsSync(target)).toBe(true);
    const svg = readFileSync(target, "utf8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("</svg>");
    // every figure draws data as lines or markers
    expect(svg.includes("<polyline") || svg.includes("<circle")).toBe(true);
  });

  it("is byte-identical across reruns", () => {
    const a = join(out, `${name}-a.svg`);
    const b = join(out, `${name}-b.svg`);
    FIGURES[name](INPUTS[name], a);
    FIGURES[name](INPUTS[name], b);
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("fails loudly when an input is missing", () => {
    const broken = [...INPUTS[name]];
    broken[0] = join(out, "does-not-exist.csv");
    expect(() => FIGURES[name](broken, join(out, "x.svg"))).toThrowError(SchemaError);
    expect(() => FIGURES[name](broken, join(out, "x.svg"))).toThrowError(/does-not-exist/);
  });

  it("fails loudly on a corrupted input", () => {
    const corrupt = join(out, `corrupt-${name}.csv`);
    writeFileSync(corrupt, "wrong,header\n1,2\n");
    const broken = [...INPUTS[name]];
    broken[broken.length - 1] = corrupt;
    expect(() => FIGURES[name](broken, join(out, "y.svg"))).toThrowError(SchemaError);
  });

  it("rejects the wrong input count", () => {
    expect(() => FIGURES[name]([], join(out, "z.svg"))).toThrowError(/--input/);
  });
});

describe("figure content", () => {
  it("attractor figure overlays the orbit on the cloud", () => {
    const target = join(out, "attr-content.svg");
    FIGURES.attractor3d(INPUTS.attractor3d, target);
    const svg = readFileSync(target, "utf8");
    expect(svg).toContain('stroke="#c22"'); // the orbit overlay
    expect(svg).toContain('stroke="#9a9a9a"'); // the attractor cloud
  });

  it("return map draws the cloud and the fixed point", () => {
    const target = join(out, "rm-content.svg");
    FIGURES.return_map(INPUTS.return_map, target);
    const svg = readFileSync(target, "utf8");
    const points = svg.match(/<circle /g) ?? [];
    expect(points.length).toBeGreaterThan(20);
    expect(svg).toContain("fixed point");
  });

  it("shift figure has two saturating curves", () => {
    const target = join(out, "shift-content.svg");
    FIGURES.shift_profiles(INPUTS.shift_profiles, target);
    const svg = readFileSync(target, "utf8");
    const curves = svg.match(/<polyline /g) ?? [];
    expect(curves.length).toBeGreaterThanOrEqual(2);
  });

  it("connection figure shows crossings inside the shadowing tube", () => {
    const target = join(out, "etop-content.svg");
    FIGURES.etop_connection(INPUTS.etop_connection, target);
    const svg = readFileSync(target, "utf8");
    expect(svg).toContain("shadowing tube");
  });

  it("eta figure marks exactly the sign changes of the data", () => {
    const target = join(out, "eta-content.svg");
    FIGURES.eta_curves(INPUTS.eta_curves, target);
    const svg = readFileSync(target, "utf8");
    let expected = 0;
    for (const path of INPUTS.eta_curves) {
      const ok = loadScan(path).filter((r) => r.eta !== null);
      for (let i = 0; i + 1 < ok.length; i++) {
        const a = ok[i].eta as number;
        const b = ok[i + 1].eta as number;
        if (a !== 0 && a < 0 !== b < 0) expected += 1;
      }
    }
    const markers = (svg.match(/<circle [^>]*fill="#c22"/g) ?? []).length;
    expect(markers).toBe(expected);
    expect(expected).toBeGreaterThan(0); // the ladder does contain roots
    const panels = (svg.match(/<rect [^>]*stroke="#444"/g) ?? []).length;
    expect(panels).toBe(4);
  });
});

describe("command line", () => {
  it("parses repeated and comma-separated inputs", () => {
    const args = parseArgs(["--input", "a.csv,b.csv", "--input", "c.csv", "-o", "fig.svg"]);
    expect(args.inputs).toEqual(["a.csv", "b.csv", "c.csv"]);
    expect(args.output).toBe("fig.svg");
  });

  it("returns 0 on success", () => {
    const target = join(out, "cli-ok.svg");
    const code = main("shift_profiles", [
      "--input", INPUTS.shift_profiles.join(","), "--output", target,
    ]);
    expect(code).toBe(0);
    expect(existsSync(target)).toBe(true);
  });

  it("returns nonzero and names the file on a missing input", () => {
    const code = main("shift_profiles", [
      "--input", "nope.csv,also-nope.csv", "--output", join(out, "cli-bad.svg"),
    ]);
    expect(code).toBe(1);
  });

  it("returns nonzero without --output", () => {
    expect(main("eta_curves", ["--input", "a.csv"])).toBe(1);
  });

  it("rejects unknown figures", () => {
    expect(main("pie_chart", ["--input", "a.csv", "--output", "b.svg"])).toBe(2);
  });
});
