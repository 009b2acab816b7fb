/**
 * Column contracts for each figure kind, matching the CSV headers the
 * eitdicke CLI emits. Rendering is a thin consumer of these files: no
 * physics is recomputed here.
 */

export const FIGURE_KINDS = [
  "lineshapes",
  "width_sweep",
  "amplitude_sweep",
  "imaging",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface ColumnContract {
  required: string[];
  optional: string[];
}

export const CONTRACTS: Record<FigureKind, ColumnContract> = {
  lineshapes: {
    required: ["theta_mrad", "detuning_hz", "s2_value"],
    optional: [],
  },
  width_sweep: {
    required: ["theta_mrad", "fwhm_theory_hz", "fwhm_fit_hz", "fwhm_numeric_hz"],
    optional: ["fwhm_mc_hz", "mc_stderr_hz"],
  },
  amplitude_sweep: {
    required: ["theta_mrad", "amplitude_ratio"],
    optional: ["recovered_ratio"],
  },
  imaging: {
    required: ["radius_m", "input", "off_resonance", "eit"],
    optional: ["theta_mrad", "recovered_ratio"],
  },
};

export function isFigureKind(value: string): value is FigureKind {
  return (FIGURE_KINDS as readonly string[]).includes(value);
}

export class ContractError extends Error {}

/** Throw unless the parsed header satisfies the figure kind's contract. */
export function checkColumns(kind: FigureKind, columns: string[]): void {
  for (const name of CONTRACTS[kind].required) {
    if (!columns.includes(name)) {
      throw new ContractError(
        `missing column '${name}' for figure kind '${kind}' (found: ${columns.join(", ")})`,
      );
    }
  }
}
