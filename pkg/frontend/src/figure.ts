/**
 * Figure assembly: map a sweep CSV onto one of the three standard views
 * (MSE vs. surface elements, vs. SNR, or vs. scattering amplitude) and
 * render it to SVG text.
 *
 * Pure view of the CSV: the only transformations are the mandated error
 * bars at +/- 3 * stderr and the optional decibel scale.
 */

import { CsvFormatError, parseSweepCsv, SweepRow } from "./csv";
import { buildChart, ChartSeries } from "./svg";

export type FigureMode = "fig2" | "fig3" | "fig4";

export interface FigureSpec {
  mode: FigureMode;
  /** Full text of a sweep CSV. */
  csvText: string;
  /** Plot raw values instead of 10*log10 (decibels are the default). */
  linear?: boolean;
}

export const MODES: Record<
  FigureMode,
  { axisName: string; xLabel: string; title: string }
> = {
  fig2: {
    axisName: "irs_elements",
    xLabel: "Number of surface elements",
    title: "Estimation MSE vs. surface size",
  },
  fig3: {
    axisName: "snr_db",
    xLabel: "SNR (dB)",
    title: "Estimation MSE vs. SNR",
  },
  fig4: {
    axisName: "amplitude",
    xLabel: "Scattering amplitude",
    title: "Estimation MSE vs. scattering amplitude",
  },
};

const COL_EMPIRICAL = "#1f6fb4";
const COL_LOWER = "#2a8f46";
const COL_UPPER = "#c63633";
const COL_ASYMPTOTIC = "#8a5ac2";

function toDb(value: number, what: string, axisValue: number): number {
  if (!(value > 0)) {
    throw new CsvFormatError(
      `non-positive ${what} (${value}) at axis_value=${axisValue}: ` +
        `the decibel scale needs positive values; rerun with --linear`,
    );
  }
  return 10 * Math.log10(value);
}

/** Render one figure; returns the SVG document as a string. */
export function renderFigure(spec: FigureSpec): string {
  const meta = MODES[spec.mode];
  const rows = parseSweepCsv(spec.csvText).slice();
  rows.sort((a, b) => a.axis_value - b.axis_value);

  const axis = rows[0]!.axis_name;
  if (axis !== meta.axisName) {
    throw new CsvFormatError(
      `mode ${spec.mode} expects axis_name "${meta.axisName}", CSV has "${axis}"`,
    );
  }

  const x = rows.map((r) => r.axis_value);
  const barLo = rows.map((r) => r.mse_empirical - 3 * r.mse_stderr);
  const barHi = rows.map((r) => r.mse_empirical + 3 * r.mse_stderr);

  const scale = spec.linear
    ? (v: number, _what: string, _r: SweepRow) => v
    : (v: number, what: string, r: SweepRow) => toDb(v, what, r.axis_value);
  const col = (pick: (r: SweepRow) => number, what: string) =>
    rows.map((r) => scale(pick(r), what, r));

  const empirical = col((r) => r.mse_empirical, "mse_empirical");
  const lower = col((r) => r.lower_bound, "lower_bound");
  const upper = col((r) => r.upper_bound, "upper_bound");
  const asymptotic = col((r) => r.mse_asymptotic, "mse_asymptotic");
  const bars = rows.map((r, i): [number, number] => [
    scale(barLo[i]!, "mse_empirical - 3*mse_stderr", r),
    scale(barHi[i]!, "mse_empirical + 3*mse_stderr", r),
  ]);

  const series: ChartSeries[] = [
    {
      values: empirical,
      color: COL_EMPIRICAL,
      label: "empirical MSE (bars: ±3·stderr)",
      cls: "empirical",
      width: 1.8,
      markers: true,
      bars,
    },
    {
      values: lower,
      color: COL_LOWER,
      label: "lower bound",
      cls: "lower",
      dash: "7,4",
    },
  ];

  // The upper bound and the asymptotic MSE agree by construction; when the
  // file confirms that, draw one line with a dual legend entry instead of
  // two overplotted copies. If a file disagrees, show both honestly.
  const coincide = rows.every(
    (r) =>
      Math.abs(r.upper_bound - r.mse_asymptotic) <=
      1e-9 * Math.max(Math.abs(r.upper_bound), Math.abs(r.mse_asymptotic)),
  );
  if (coincide) {
    series.push({
      values: upper,
      color: COL_UPPER,
      label: "upper bound = asymptotic MSE",
      cls: "upper-asymptotic",
      dash: "2,3",
      width: 1.8,
    });
  } else {
    series.push(
      {
        values: upper,
        color: COL_UPPER,
        label: "upper bound",
        cls: "upper",
        dash: "2,3",
        width: 1.8,
      },
      {
        values: asymptotic,
        color: COL_ASYMPTOTIC,
        label: "asymptotic MSE",
        cls: "asymptotic",
        dash: "9,3,2,3",
      },
    );
  }

  return buildChart({
    title: meta.title,
    xLabel: meta.xLabel,
    yLabel: spec.linear ? "MSE per entry" : "MSE per entry (dB)",
    x,
    series,
    // MSE decays with SNR (fig3) but grows along the other two axes, so
    // pin the legend to the corner the curves leave empty.
    legend: spec.mode === "fig3" ? "top-right" : "bottom-right",
  });
}
