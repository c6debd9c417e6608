/** Figure-script entry point.
 *
 * Usage:
 *   node dist/cli.js plot-polarization --input <beta:path | *_beta_x.csv> [--input ...] --out fig.svg [--columns a,b]
 *   node dist/cli.js plot-fictitious   (same flags)
 *   node dist/cli.js plot-entanglement (same flags)
 *   node dist/cli.js plot-ghz --input ghz_bench.csv --out ghz.svg
 *
 * Exit codes: 0 ok, 1 schema/data error, 2 usage error.
 */

import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";

import { SchemaError } from "./csv.js";
import {
  entanglementFigure,
  fictitiousFigure,
  ghzFigure,
  loadTrajectories,
  polarizationFigure,
} from "./figures.js";

export class UsageError extends Error {}

interface Args {
  command: string;
  inputs: string[];
  out: string;
  columns?: string[];
}

const COMMANDS = new Set(["plot-polarization", "plot-fictitious", "plot-entanglement", "plot-ghz"]);

export function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (!command || !COMMANDS.has(command)) {
    throw new UsageError(
      `expected one of: ${[...COMMANDS].join(", ")}; got '${command ?? "(nothing)"}'`,
    );
  }
  const inputs: string[] = [];
  let out: string | undefined;
  let columns: string[] | undefined;
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i]!;
    const value = rest[i + 1];
    if (value === undefined) {
      throw new UsageError(`flag ${flag} needs a value`);
    }
    if (flag === "--input") {
      inputs.push(value);
    } else if (flag === "--out") {
      out = value;
    } else if (flag === "--columns") {
      columns = value.split(",").map((c) => c.trim());
    } else {
      throw new UsageError(`unknown flag '${flag}'`);
    }
    i++;
  }
  if (inputs.length === 0) {
    throw new UsageError("at least one --input is required");
  }
  if (!out) {
    throw new UsageError("--out is required");
  }
  return { command, inputs, out, columns };
}

export function buildFigure(args: Args): string {
  if (args.command === "plot-ghz") {
    if (args.inputs.length !== 1) {
      throw new UsageError("plot-ghz takes exactly one --input CSV");
    }
    return ghzFigure(args.inputs[0]!);
  }
  const inputs = loadTrajectories(args.inputs);
  switch (args.command) {
    case "plot-polarization":
      return polarizationFigure(inputs, args.columns);
    case "plot-fictitious":
      return fictitiousFigure(inputs, args.columns);
    default:
      return entanglementFigure(inputs, args.columns);
  }
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const svg = buildFigure(args);
    mkdirSync(dirname(args.out), { recursive: true });
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
