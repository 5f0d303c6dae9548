#!/usr/bin/env node
/**
 * render --mode fig2|fig3|fig4 --in sweep.csv --out fig.svg [--linear]
 *
 * Reads a sweep CSV produced by `irslab sweep` and writes the matching
 * figure as an SVG file. fig2 plots MSE against the surface element
 * count, fig3 against SNR, fig4 against the scattering amplitude.
 */

import { readFileSync, writeFileSync } from "fs";
import yargs from "yargs";
import { CsvFormatError } from "./csv";
import { FigureMode, renderFigure } from "./figure";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("render")
    .option("mode", {
      choices: ["fig2", "fig3", "fig4"] as const,
      demandOption: true,
      describe:
        "fig2: MSE vs surface elements, fig3: MSE vs SNR, fig4: MSE vs amplitude",
    })
    .option("in", {
      type: "string",
      demandOption: true,
      describe: "input sweep CSV",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("linear", {
      type: "boolean",
      default: false,
      describe: "plot raw values instead of decibels",
    })
    .strict()
    .exitProcess(false)
    .fail((msg) => {
      throw new UsageError(msg);
    })
    .parseSync();

  let csvText: string;
  try {
    csvText = readFileSync(args.in, "utf-8");
  } catch (err) {
    process.stderr.write(`error: cannot read ${args.in}: ${message(err)}\n`);
    return 1;
  }

  let svg: string;
  try {
    svg = renderFigure({
      mode: args.mode as FigureMode,
      csvText,
      linear: args.linear,
    });
  } catch (err) {
    if (err instanceof CsvFormatError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }

  writeFileSync(args.out, svg, "utf-8");
  return 0;
}

class UsageError extends Error {}

function message(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

if (require.main === module) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (err) {
    process.stderr.write(`error: ${message(err)}\n`);
    process.exit(err instanceof UsageError ? 2 : 1);
  }
}
