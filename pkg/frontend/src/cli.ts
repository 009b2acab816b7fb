#!/usr/bin/env node
/**
 * plot_figs <figure_kind> <input.csv> <output image>
 *
 * figure_kind: lineshapes | width_sweep | amplitude_sweep | imaging
 */

import { ContractError, FIGURE_KINDS, isFigureKind } from "./contracts";
import { render } from "./render";

export function main(argv: string[]): number {
  if (argv.length !== 3) {
    process.stderr.write(
      `usage: plot_figs <${FIGURE_KINDS.join("|")}> <input.csv> <output image>\n`,
    );
    return 1;
  }
  const [kind, inputCsv, outputImage] = argv;
  if (!isFigureKind(kind)) {
    process.stderr.write(
      `unknown figure kind '${kind}' (expected one of: ${FIGURE_KINDS.join(", ")})\n`,
    );
    return 1;
  }
  try {
    render({ figureKind: kind, inputCsv, outputImage });
  } catch (err) {
    if (err instanceof ContractError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      process.stderr.write(`I/O error: ${err.message}\n`);
      return 3;
    }
    throw err;
  }
  process.stdout.write(`wrote ${outputImage}\n`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
