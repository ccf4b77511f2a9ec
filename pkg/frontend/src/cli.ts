#!/usr/bin/env node
import { writeFileSync } from "node:fs";

import { renderFigure, FIGURES, SchemaError } from "./index.js";

function usage(): never {
  const ids = Object.keys(FIGURES).sort().join("\n    ");
  process.stderr.write(
    `usage: render --figure <id> --data <dir> --out <path.svg>\n  figure ids:\n    ${ids}\n`,
  );
  process.exit(2);
}

function parseArgs(argv: string[]): { figure: string; data: string; out: string } {
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key?.startsWith("--") || val === undefined) usage();
    args[key.slice(2)] = val;
  }
  if (!args.figure || !args.data || !args.out) usage();
  return { figure: args.figure, data: args.data, out: args.out };
}

function main(): void {
  const { figure, data, out } = parseArgs(process.argv.slice(2));
  try {
    const svg = renderFigure(figure, data);
    writeFileSync(out, svg);
    process.stdout.write(`${figure} -> ${out}\n`);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${(err as Error).message}\n`);
      process.exit(3);
    }
    process.stderr.write(`${(err as Error).message}\n`);
    process.exit(1);
  }
}

main();
