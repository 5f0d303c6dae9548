/**
 * Deterministic SVG line-chart builder.
 *
 * Fixed layout, fixed palette, no timestamps or random ids: identical
 * inputs produce byte-identical SVG text. Each series is drawn as a
 * polyline carrying a stable class name so the output is inspectable.
 */

export interface ChartSeries {
  /** y value per x position, in plot units. */
  values: number[];
  color: string;
  label: string;
  /** Stable class suffix, e.g. "empirical" -> class="series-empirical". */
  cls: string;
  width?: number;
  dash?: string;
  /** Draw circle markers at the data points. */
  markers?: boolean;
  /** Per-point [low, high] vertical error bars, in plot units. */
  bars?: Array<[number, number]>;
}

export interface ChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  x: number[];
  series: ChartSeries[];
  /** Corner to pin the legend to; pick the one the curves leave empty. */
  legend: "top-right" | "bottom-right";
}

const W = 720;
const H = 430;
const ML = 64;
const MR = 24;
const MT = 40;
const MB = 56;
const PW = W - ML - MR;
const PH = H - MT - MB;

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Round-number axis ticks covering [min, max] with about `count` steps. */
function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Fixed-precision tick label without trailing zeros ("2.50" -> "2.5"). */
function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(1);
  return String(parseFloat(v.toFixed(4)));
}

export function buildChart(opts: ChartOpts): string {
  const { x, series } = opts;

  const xMin = Math.min(...x);
  const xMax = Math.max(...x);
  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * PW;

  const yValues = series.flatMap((s) => [
    ...s.values,
    ...(s.bars ?? []).flatMap(([lo, hi]) => [lo, hi]),
  ]);
  const ySpread = Math.max(...yValues) - Math.min(...yValues) || 1;
  const yMin = Math.min(...yValues) - 0.05 * ySpread;
  const yMax = Math.max(...yValues) + 0.05 * ySpread;
  const yOf = (v: number) => MT + PH - ((v - yMin) / (yMax - yMin)) * PH;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="${MT - 16}" font-size="14" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  // Grid and y ticks
  const yTicks = niceTicks(yMin, yMax, 6);
  for (const v of yTicks) {
    const y = yOf(v).toFixed(2);
    s += `<line x1="${ML}" y1="${y}" x2="${ML + PW}" y2="${y}" stroke="#e8e8e8" stroke-width="0.6"/>\n`;
    s += `<line x1="${ML - 4}" y1="${y}" x2="${ML}" y2="${y}" stroke="#333" stroke-width="0.7"/>\n`;
    s += `<text x="${ML - 7}" y="${(yOf(v) + 3.5).toFixed(2)}" text-anchor="end" font-size="11" fill="#444">${esc(fmtTick(v))}</text>\n`;
  }

  // X ticks at the data positions (sweeps are short; one tick per point)
  for (const v of x) {
    const xp = xOf(v).toFixed(2);
    s += `<line x1="${xp}" y1="${MT + PH}" x2="${xp}" y2="${MT + PH + 4}" stroke="#333" stroke-width="0.7"/>\n`;
    s += `<text x="${xp}" y="${MT + PH + 17}" text-anchor="middle" font-size="11" fill="#444">${esc(fmtTick(v))}</text>\n`;
  }

  // Series
  for (const sr of series) {
    const pts = x
      .map((xv, i) => `${xOf(xv).toFixed(2)},${yOf(sr.values[i]!).toFixed(2)}`)
      .join(" ");
    s += `<polyline class="series-${sr.cls}" fill="none" stroke="${sr.color}" stroke-width="${sr.width ?? 1.6}"${sr.dash ? ` stroke-dasharray="${sr.dash}"` : ""} points="${pts}"/>\n`;

    if (sr.bars) {
      for (let i = 0; i < x.length; i++) {
        const bar = sr.bars[i]!;
        const xp = xOf(x[i]!).toFixed(2);
        const yLo = yOf(bar[0]).toFixed(2);
        const yHi = yOf(bar[1]).toFixed(2);
        s += `<line class="errbar" x1="${xp}" y1="${yLo}" x2="${xp}" y2="${yHi}" stroke="${sr.color}" stroke-width="1.1"/>\n`;
        for (const yEnd of [yLo, yHi]) {
          s += `<line x1="${(xOf(x[i]!) - 3.5).toFixed(2)}" y1="${yEnd}" x2="${(xOf(x[i]!) + 3.5).toFixed(2)}" y2="${yEnd}" stroke="${sr.color}" stroke-width="1.1"/>\n`;
        }
      }
    }

    if (sr.markers) {
      for (let i = 0; i < x.length; i++) {
        s += `<circle class="pt" cx="${xOf(x[i]!).toFixed(2)}" cy="${yOf(sr.values[i]!).toFixed(2)}" r="2.6" fill="${sr.color}"/>\n`;
      }
    }
  }

  // Axes frame
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333" stroke-width="1"/>\n`;
  s += `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333" stroke-width="1"/>\n`;
  s += `<text x="${ML + PW / 2}" y="${H - 14}" text-anchor="middle" font-size="12.5" fill="#222">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="18" y="${MT + PH / 2}" text-anchor="middle" font-size="12.5" fill="#222" transform="rotate(-90,18,${MT + PH / 2})">${esc(opts.yLabel)}</text>\n`;

  const legendW = Math.max(...series.map((sr) => sr.label.length)) * 6.4 + 34;
  const legendH = series.length * 16 + 8;
  const lx = Math.round(ML + PW - legendW - 10);
  const ly = opts.legend === "top-right" ? MT + 10 : MT + PH - legendH - 10;
  s += `<rect x="${lx}" y="${ly}" width="${legendW.toFixed(2)}" height="${legendH}" rx="3" fill="#fff" fill-opacity="0.9" stroke="#ccc" stroke-width="0.6"/>\n`;
  series.forEach((sr, i) => {
    const yy = ly + 12 + i * 16;
    s += `<line x1="${lx + 8}" y1="${yy}" x2="${lx + 26}" y2="${yy}" stroke="${sr.color}" stroke-width="${sr.width ?? 1.6}"${sr.dash ? ` stroke-dasharray="${sr.dash}"` : ""}/>\n`;
    if (sr.markers) {
      s += `<circle cx="${lx + 17}" cy="${yy}" r="2.6" fill="${sr.color}"/>\n`;
    }
    s += `<text x="${lx + 31}" y="${yy + 3.5}" font-size="11" fill="#333">${esc(sr.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
