/**
 * The five figure renderers. Inputs are the core CLI's files; no numerics
 * happen here beyond projections and sign checks on already-computed data.
 */

import { writeFileSync } from "fs";
import {
  loadCrossings,
  loadOrbitReport,
  loadScan,
  loadShift,
  loadTrajectory,
  SchemaError,
  ScanRow,
} from "./schemas";
import { extentOf, panel, Svg } from "./svg";

const AZIMUTH = (-60 * Math.PI) / 180;
const ELEVATION = (22 * Math.PI) / 180;

/** Orthographic 3-D to 2-D projection with fixed view angles. */
function project(x: number, y: number, z: number): [number, number] {
  const ca = Math.cos(AZIMUTH);
  const sa = Math.sin(AZIMUTH);
  const u = -x * sa + y * ca;
  const v = -(x * ca + y * sa) * Math.sin(ELEVATION) + z * Math.cos(ELEVATION);
  return [u, v];
}

export function renderAttractor3d(inputs: string[], output: string): void {
  const [trajPath, orbitPath] = requireInputs("attractor3d", inputs, 2);
  const attractor = loadTrajectory(trajPath);
  const orbit = loadTrajectory(orbitPath);

  const attractorPts = attractor.map((r) => project(r.x, r.y, r.z));
  const orbitPts = orbit.map((r) => project(r.x, r.y, r.z));
  const xs = attractorPts.map((p) => p[0]).concat(orbitPts.map((p) => p[0]));
  const ys = attractorPts.map((p) => p[1]).concat(orbitPts.map((p) => p[1]));

  const svg = new Svg(640, 520);
  const frame = panel(svg, 70, 40, 520, 420, extentOf(xs), extentOf(ys),
                      "projected x-y", "projected z", "chaotic attractor with embedded saddle orbit");
  svg.polyline(attractorPts.map(([u, v]) => [frame.sx(u), frame.sy(v)]), "#9a9a9a", 0.7, 0.85);
  svg.polyline(orbitPts.map(([u, v]) => [frame.sx(u), frame.sy(v)]), "#c22", 2.2);
  svg.text(90, 60, "gray: long trajectory, red: period-one orbit", 11);
  writeFileSync(output, svg.toString());
}

export function renderReturnMap(inputs: string[], output: string): void {
  const [crossingsPath, orbitPath] = requireInputs("return_map", inputs, 2);
  const crossings = loadCrossings(crossingsPath);
  if (crossings.length < 3) {
    throw new SchemaError(`${crossingsPath}: need at least 3 crossings for a return map`);
  }
  const orbit = loadOrbitReport(orbitPath);

  const pairs: Array<[number, number]> = [];
  for (let i = 0; i + 1 < crossings.length; i++) {
    pairs.push([crossings[i].x, crossings[i + 1].x]);
  }
  const values = pairs.flat().concat([orbit.gamma[0]]);
  const domain = extentOf(values);

  const svg = new Svg(560, 540);
  const frame = panel(svg, 80, 40, 420, 420, domain, domain,
                      "x_n", "x_{n+1}", "section return map");
  svg.line(frame.sx(domain.min), frame.sy(domain.min), frame.sx(domain.max), frame.sy(domain.max),
           "#bbb", 1, "4 3");
  for (const [a, b] of pairs) {
    svg.circle(frame.sx(a), frame.sy(b), 2.2, "#1668b4", 0.8);
  }
  svg.circle(frame.sx(orbit.gamma[0]), frame.sy(orbit.gamma[0]), 4.5, "#c22");
  svg.text(frame.sx(orbit.gamma[0]) + 8, frame.sy(orbit.gamma[0]) - 6, "fixed point", 11, "start", "#c22");
  writeFileSync(output, svg.toString());
}

export function renderShiftProfiles(inputs: string[], output: string): void {
  const [smoothPath, piecewisePath] = requireInputs("shift_profiles", inputs, 2);
  const smooth = loadShift(smoothPath);
  const piecewise = loadShift(piecewisePath);

  const ts = smooth.map((r) => r.t).concat(piecewise.map((r) => r.t));
  const as = smooth.map((r) => r.a).concat(piecewise.map((r) => r.a));

  const svg = new Svg(620, 420);
  const frame = panel(svg, 80, 40, 480, 320, extentOf(ts), extentOf(as, 0.12),
                      "t", "a", "parameter ramp: smooth vs piecewise-linear");
  svg.line(frame.x0, frame.sy(0), frame.x0 + frame.w, frame.sy(0), "#ddd");
  svg.polyline(smooth.map((r) => [frame.sx(r.t), frame.sy(r.a)]), "#1668b4", 2);
  svg.polyline(piecewise.map((r) => [frame.sx(r.t), frame.sy(r.a)]), "#c22", 1.6);
  svg.text(100, 62, "blue: smooth ramp, red: piecewise-linear", 11);
  writeFileSync(output, svg.toString());
}

export function renderEtopConnection(inputs: string[], output: string): void {
  const [trajPath, crossingsPath, orbitPath] = requireInputs("etop_connection", inputs, 3);
  const traj = loadTrajectory(trajPath);
  const crossings = loadCrossings(crossingsPath);
  const orbit = loadOrbitReport(orbitPath);
  if (crossings.length === 0) {
    throw new SchemaError(`${crossingsPath}: no crossings; not a connection run`);
  }

  const svg = new Svg(720, 620);

  // top: x(t) time series
  const top = panel(
    svg, 80, 40, 560, 230,
    extentOf(traj.map((r) => r.t), 0.02),
    extentOf(traj.map((r) => r.x)),
    "t", "x", "time series of the run"
  );
  svg.polyline(traj.map((r) => [top.sx(r.t), top.sy(r.x)]), "#1668b4", 0.9);

  // bottom: section-crossing distance from the orbit's fixed point
  const dists = crossings.map((c) =>
    Math.hypot(c.x - orbit.gamma[0], c.z - orbit.gamma[1])
  );
  const logD = dists.map((d) => Math.log10(Math.max(d, 1e-16)));
  const bottom = panel(
    svg, 80, 340, 560, 230,
    extentOf(crossings.map((c) => c.t), 0.02),
    extentOf(logD.concat([Math.log10(0.05)]), 0.1),
    "crossing time", "log10 |crossing - fixed point|", "approach to the saddle orbit"
  );
  svg.line(bottom.x0, bottom.sy(Math.log10(0.05)), bottom.x0 + bottom.w, bottom.sy(Math.log10(0.05)),
           "#c22", 1, "5 3");
  svg.text(bottom.x0 + bottom.w - 4, bottom.sy(Math.log10(0.05)) - 5, "shadowing tube", 10, "end", "#c22");
  const pts: Array<[number, number]> = crossings.map((c, i) => [bottom.sx(c.t), bottom.sy(logD[i])]);
  svg.polyline(pts, "#888", 0.8);
  for (const [px, py] of pts) {
    svg.circle(px, py, 2.4, "#1668b4");
  }
  writeFileSync(output, svg.toString());
}

export function renderEtaCurves(inputs: string[], output: string): void {
  const paths = requireInputs("eta_curves", inputs, 4);
  const scans = paths.map((p) => loadScan(p));

  const svg = new Svg(680, 4 * 190 + 70);
  scans.forEach((rows, idx) => {
    const ok = rows.filter((r): r is ScanRow & { eta: number } => r.eta !== null);
    if (ok.length < 2) {
      throw new SchemaError(`${paths[idx]}: fewer than 2 ok rows; nothing to plot`);
    }
    const frame = panel(
      svg, 80, 40 + idx * 190, 540, 140,
      extentOf(rows.map((r) => r.r), 0.01),
      extentOf(ok.map((r) => r.eta), 0.1),
      idx === scans.length - 1 ? "r" : "",
      "eta",
      labelFor(paths[idx])
    );
    svg.line(frame.x0, frame.sy(0), frame.x0 + frame.w, frame.sy(0), "#bbb", 1, "4 3");
    // break the curve at failed rows instead of bridging them
    let segment: Array<[number, number]> = [];
    for (const row of rows) {
      if (row.eta === null) {
        svg.polyline(segment, "#1668b4", 1.4);
        segment = [];
      } else {
        segment.push([frame.sx(row.r), frame.sy(row.eta)]);
      }
    }
    svg.polyline(segment, "#1668b4", 1.4);
    // mark the roots: sign changes between consecutive ok rows
    for (let i = 0; i + 1 < ok.length; i++) {
      const a = ok[i];
      const b = ok[i + 1];
      if (a.eta !== 0 && a.eta < 0 !== b.eta < 0) {
        const root = a.r - (a.eta * (b.r - a.r)) / (b.eta - a.eta);
        svg.circle(frame.sx(root), frame.sy(0), 3.5, "#c22");
      }
    }
  });
  writeFileSync(output, svg.toString());
}

function labelFor(path: string): string {
  const base = path.split("/").pop() ?? path;
  return base.replace(/\.csv$/, "");
}

function requireInputs(figure: string, inputs: string[], n: number): string[] {
  if (inputs.length !== n) {
    throw new SchemaError(
      `${figure} needs exactly ${n} --input file(s), got ${inputs.length}`
    );
  }
  return inputs;
}

export const FIGURES: Record<string, (inputs: string[], output: string) => void> = {
  attractor3d: renderAttractor3d,
  return_map: renderReturnMap,
  shift_profiles: renderShiftProfiles,
  etop_connection: renderEtopConnection,
  eta_curves: renderEtaCurves,
};
