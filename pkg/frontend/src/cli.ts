#!/usr/bin/env node
/**
 * figures: render the experiment CSVs as SVG.
 *
 *   figures convergence --in traces.csv --out fig.svg [--dump-series]
 *   figures sweep --in summary.csv --out fig.svg [--axis power_dbm] [--dump-series]
 *
 * --dump-series prints the plotted values (raw CSV tokens) as JSON instead
 * of writing the image.
 */

import { writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { CsvError } from "./csv";
import { Series, convergenceSeries, dumpSeries, sweepSeries } from "./series";
import { renderChart } from "./svg";

const AXIS_LABELS: Record<string, string> = {
  power_dbm: "transmit power (dBm)",
  ris_elements: "surface elements",
};

interface PlotArgs {
  in: string;
  out?: string;
  dumpSeries: boolean;
  axis?: string;
}

function emit(args: PlotArgs, series: Series[], xLabel: string,
              withIntervals: boolean): void {
  if (args.dumpSeries) {
    process.stdout.write(dumpSeries(series) + "\n");
    return;
  }
  if (!args.out) {
    throw new CsvError("--out is required unless --dump-series is given");
  }
  const svg = renderChart(series, xLabel, "sum secrecy rate (bits)", withIntervals);
  writeFileSync(args.out, svg, "utf-8");
  process.stderr.write(`wrote ${args.out}\n`);
}

export function run(argv: string[]): number {
  try {
    yargs(argv)
      .scriptName("figures")
      .command<PlotArgs>(
        "convergence",
        "line plot of sum secrecy per iteration, one series per scheme",
        (cmd) => cmd
          .option("in", { type: "string", demandOption: true })
          .option("out", { type: "string" })
          .option("dump-series", { type: "boolean", default: false }),
        (args) => emit(args, convergenceSeries(args.in), "iteration", false))
      .command<PlotArgs>(
        "sweep",
        "mean with 95% interval per scheme versus the sweep value",
        (cmd) => cmd
          .option("in", { type: "string", demandOption: true })
          .option("out", { type: "string" })
          .option("axis", { type: "string" })
          .option("dump-series", { type: "boolean", default: false }),
        (args) => {
          const { axis, series } = sweepSeries(args.in, args.axis);
          emit(args, series, AXIS_LABELS[axis] ?? axis, true);
        })
      .demandCommand(1, "choose a subcommand: convergence or sweep")
      .strict()
      .exitProcess(false)
      .fail((msg, err) => {
        throw err ?? new CsvError(msg);
      })
      .parseSync();
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(run(hideBin(process.argv)));
}
