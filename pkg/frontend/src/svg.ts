/**
 * A tiny deterministic SVG plot kit: fixed canvas, fixed precision, no
 * timestamps, so identical inputs give byte-identical images.
 */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[], pad = 0.05): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!(min < max)) {
    // degenerate data: open up a unit window around the value
    const mid = Number.isFinite(min) ? min : 0;
    return { min: mid - 0.5, max: mid + 0.5 };
  }
  const span = max - min;
  return { min: min - pad * span, max: max + pad * span };
}

export function scale(domain: Extent, rangeLo: number, rangeHi: number) {
  const k = (rangeHi - rangeLo) / (domain.max - domain.min);
  return (v: number) => rangeLo + (v - domain.min) * k;
}

const fmt = (v: number) => (Object.is(v, -0) ? "0" : String(Number(v.toFixed(2))));

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
    );
    this.parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = "") {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${d}/>`
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1, opacity = 1) {
    if (points.length < 2) return;
    const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const op = opacity === 1 ? "" : ` stroke-opacity="${opacity}"`;
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="${width}"${op}/>`
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, opacity = 1) {
    const op = opacity === 1 ? "" : ` fill-opacity="${opacity}"`;
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"${op}/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "start", fill = "#222") {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}">${content}</text>`
    );
  }

  rect(x: number, y: number, w: number, h: number, stroke: string, fill = "none") {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `stroke="${stroke}" fill="${fill}"/>`
    );
  }

  toString(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
  sx: (v: number) => number;
  sy: (v: number) => number;
}

/** Draw a framed panel with tick labels; returns data-to-pixel scales. */
export function panel(
  svg: Svg,
  x0: number,
  y0: number,
  w: number,
  h: number,
  xDomain: Extent,
  yDomain: Extent,
  xLabel: string,
  yLabel: string,
  title = ""
): Frame {
  svg.rect(x0, y0, w, h, "#444");
  const sx = scale(xDomain, x0, x0 + w);
  const sy = scale(yDomain, y0 + h, y0); // flipped: SVG y grows downward
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const xv = xDomain.min + frac * (xDomain.max - xDomain.min);
    const yv = yDomain.min + frac * (yDomain.max - yDomain.min);
    svg.line(sx(xv), y0 + h, sx(xv), y0 + h + 4, "#444");
    svg.text(sx(xv), y0 + h + 16, xv.toPrecision(4), 10, "middle");
    svg.line(x0 - 4, sy(yv), x0, sy(yv), "#444");
    svg.text(x0 - 6, sy(yv) + 3, yv.toPrecision(3), 10, "end");
  }
  svg.text(x0 + w / 2, y0 + h + 30, xLabel, 12, "middle");
  svg.text(x0 - 52, y0 - 8, yLabel, 12, "start");
  if (title) {
    svg.text(x0 + w / 2, y0 - 8, title, 12, "middle");
  }
  return { x0, y0, w, h, sx, sy };
}
