/**
 * Standalone figure renderer.
 *
 * Usage:
 *   node dist/cli.js --kind scatter       --in phase_records.csv --out fig3.svg
 *   node dist/cli.js --kind phase_curves  --in theta_records.csv --out fig2.svg
 *   node dist/cli.js --kind heatmap                              --out fig4.svg
 *
 * Exit codes: 0 success, 1 usage, 2 input/schema error.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { FigureKind, render } from "./figures.js";
import { SchemaError } from "./records.js";

const KINDS: FigureKind[] = ["scatter", "phase_curves", "heatmap"];

interface Args {
  kind: FigureKind;
  input?: string;
  output: string;
}

function usage(message: string): never {
  process.stderr.write(`error: ${message}\n`);
  process.stderr.write(
    "usage: cli --kind {scatter|phase_curves|heatmap} [--in FILE] --out FILE\n"
  );
  process.exit(1);
}

function parseArgs(argv: string[]): Args {
  let kind: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      usage(`missing value for ${flag}`);
    }
    if (flag === "--kind") kind = value;
    else if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else usage(`unknown flag ${flag}`);
  }
  if (kind === undefined || !KINDS.includes(kind as FigureKind)) {
    usage(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (output === undefined) {
    usage("--out is required");
  }
  if (kind !== "heatmap" && input === undefined) {
    usage(`--in is required for kind ${kind}`);
  }
  return { kind: kind as FigureKind, input, output };
}

function main(): void {
  const args = parseArgs(process.argv.slice(2));
  let inputText: string | undefined;
  if (args.input !== undefined) {
    try {
      inputText = readFileSync(args.input, "utf8");
    } catch (err) {
      process.stderr.write(`error: cannot read ${args.input}: ${String(err)}\n`);
      process.exit(2);
    }
  }
  try {
    const svg = render({ kind: args.kind, inputText });
    writeFileSync(args.output, svg);
    process.stdout.write(`wrote ${args.output}\n`);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      process.exit(2);
    }
    throw err;
  }
}

main();
