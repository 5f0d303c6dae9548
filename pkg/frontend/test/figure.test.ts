import { readFileSync } from "fs";
import { resolve } from "path";
import { describe, expect, it } from "vitest";
import { EXPECTED_HEADER } from "../src/csv";
import { renderFigure } from "../src/figure";

const FIXTURES = resolve(process.cwd(), "test", "fixtures");
const fig2Csv = readFileSync(resolve(FIXTURES, "fig2_m1.csv"), "utf-8");
const fig3Csv = readFileSync(resolve(FIXTURES, "fig3_snr.csv"), "utf-8");
const fig4Csv = readFileSync(resolve(FIXTURES, "fig4_v.csv"), "utf-8");

const HEADER = EXPECTED_HEADER.join(",");

/** Pull a polyline's points out of the SVG by its series class. */
function seriesPoints(svg: string, cls: string): Array<[number, number]> {
  const m = svg.match(
    new RegExp(`<polyline class="series-${cls}"[^>]* points="([^"]+)"`),
  );
  expect(m, `series-${cls} present`).toBeTruthy();
  return m![1]!.split(" ").map((pair) => {
    const [x, y] = pair.split(",").map(Number);
    return [x!, y!];
  });
}

describe("renderFigure", () => {
  it("renders all three modes from real sweep CSVs", () => {
    for (const [mode, csvText] of [
      ["fig2", fig2Csv],
      ["fig3", fig3Csv],
      ["fig4", fig4Csv],
    ] as const) {
      const svg = renderFigure({ mode, csvText });
      expect(svg).toContain("<svg ");
      expect(svg).toContain("</svg>");
      expect(svg).toContain('class="series-empirical"');
      expect(svg).toContain('class="series-lower"');
    }
  });

  it("is deterministic: repeated renders are byte-identical", () => {
    const a = renderFigure({ mode: "fig2", csvText: fig2Csv });
    const b = renderFigure({ mode: "fig2", csvText: fig2Csv });
    expect(a).toBe(b);
    expect(renderFigure({ mode: "fig3", csvText: fig3Csv, linear: true })).toBe(
      renderFigure({ mode: "fig3", csvText: fig3Csv, linear: true }),
    );
  });

  it("fig2 shows upper/empirical coincidence beyond 4 elements", () => {
    const svg = renderFigure({ mode: "fig2", csvText: fig2Csv });
    const emp = seriesPoints(svg, "empirical");
    const upper = seriesPoints(svg, "upper-asymptotic");
    // fixture sweeps 1, 2, 4, 8, 16, 32 in ascending order
    expect(emp).toHaveLength(6);
    for (let i = 0; i < 6; i++) {
      expect(emp[i]![0]).toBe(upper[i]![0]);
    }
    for (const i of [3, 4, 5]) {
      const gap = Math.abs(emp[i]![1] - upper[i]![1]);
      expect(gap, `element count > 4 at index ${i}`).toBeLessThanOrEqual(2);
    }
    const gapAtOne = Math.abs(emp[0]![1] - upper[0]![1]);
    expect(gapAtOne, "curves are distinct at one element").toBeGreaterThan(6);
  });

  it("draws one error bar per data row", () => {
    const svg = renderFigure({ mode: "fig2", csvText: fig2Csv });
    expect(svg.match(/class="errbar"/g)).toHaveLength(6);
    expect(svg.match(/class="pt"/g)).toHaveLength(6);
  });

  it("merges upper bound and asymptotic MSE into one dual-labeled line", () => {
    const svg = renderFigure({ mode: "fig2", csvText: fig2Csv });
    expect(svg).toContain("upper bound = asymptotic MSE");
    expect(svg).not.toContain('class="series-asymptotic"');
  });

  it("splits the two lines when a file disagrees", () => {
    const lines = fig2Csv.trim().split("\n");
    const doctored = [
      lines[0],
      ...lines.slice(1).map((l) => {
        const f = l.split(",");
        f[6] = String(Number(f[6]) * 1.1);
        return f.join(",");
      }),
    ].join("\n");
    const svg = renderFigure({ mode: "fig2", csvText: doctored });
    expect(svg).toContain('class="series-upper"');
    expect(svg).toContain('class="series-asymptotic"');
    expect(svg).not.toContain("upper bound = asymptotic MSE");
  });

  it("rejects a CSV whose axis does not match the mode", () => {
    expect(() => renderFigure({ mode: "fig2", csvText: fig3Csv })).toThrow(
      /mode fig2 expects axis_name "irs_elements", CSV has "snr_db"/,
    );
  });

  it("labels the y axis by scale", () => {
    expect(renderFigure({ mode: "fig3", csvText: fig3Csv })).toContain(
      "MSE per entry (dB)",
    );
    expect(
      renderFigure({ mode: "fig3", csvText: fig3Csv, linear: true }),
    ).toContain(">MSE per entry</text>");
  });

  it("plots rows in ascending axis order regardless of file order", () => {
    const lines = fig3Csv.trim().split("\n");
    const reversed = [lines[0], ...lines.slice(1).reverse()].join("\n");
    const svg = renderFigure({ mode: "fig3", csvText: reversed });
    const emp = seriesPoints(svg, "empirical");
    for (let i = 1; i < emp.length; i++) {
      expect(emp[i]![0]).toBeGreaterThan(emp[i - 1]![0]);
    }
    expect(svg).toBe(renderFigure({ mode: "fig3", csvText: fig3Csv }));
  });

  it("refuses non-positive values on the decibel scale, advising --linear", () => {
    const zeroLower = [
      HEADER,
      "snr_db,0,0.5,0.001,0.0,0.6,0.6,1000,7",
      "snr_db,5,0.4,0.001,0.3,0.5,0.5,1000,7",
    ].join("\n");
    expect(() => renderFigure({ mode: "fig3", csvText: zeroLower })).toThrow(
      /non-positive lower_bound .* rerun with --linear/,
    );
    expect(renderFigure({ mode: "fig3", csvText: zeroLower, linear: true }))
      .toContain("</svg>");
  });

  it("treats an error bar that crosses zero as non-positive in dB mode", () => {
    const wideBar = [
      HEADER,
      "snr_db,0,0.003,0.002,0.001,0.6,0.6,10,7",
      "snr_db,5,0.4,0.001,0.3,0.5,0.5,10,7",
    ].join("\n");
    expect(() => renderFigure({ mode: "fig3", csvText: wideBar })).toThrow(
      /mse_empirical - 3\*mse_stderr/,
    );
    expect(renderFigure({ mode: "fig3", csvText: wideBar, linear: true }))
      .toContain("</svg>");
  });
});
