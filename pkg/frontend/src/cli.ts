/**
 * Shared command-line front end for the figure scripts.
 *
 * Every script takes `--input a.csv[,b.csv...]` (repeatable) and
 * `--output figure.svg`; schema violations and missing files exit nonzero
 * with a message naming the offending input.
 */

import { FIGURES } from "./figures";
import { SchemaError } from "./schemas";

export interface Args {
  inputs: string[];
  output: string;
}

export function parseArgs(argv: string[]): Args {
  const inputs: string[] = [];
  let output = "";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--input" || arg === "-i") {
      const value = argv[++i];
      if (!value) throw new SchemaError("--input needs a value");
      inputs.push(...value.split(",").filter((s) => s.length > 0));
    } else if (arg === "--output" || arg === "-o") {
      const value = argv[++i];
      if (!value) throw new SchemaError("--output needs a value");
      output = value;
    } else {
      throw new SchemaError(`unknown argument: ${arg}`);
    }
  }
  if (inputs.length === 0) throw new SchemaError("at least one --input is required");
  if (!output) throw new SchemaError("--output is required");
  return { inputs, output };
}

export function main(figure: string, argv: string[]): number {
  const render = FIGURES[figure];
  if (!render) {
    console.error(`unknown figure: ${figure}`);
    return 2;
  }
  try {
    const args = parseArgs(argv);
    render(args.inputs, args.output);
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`${figure}: ${err.message}`);
      return 1;
    }
    throw err;
  }
}
