import * as fs from "node:fs";
import * as path from "node:path";
import * as echarts from "echarts";
import type { EChartsOption, SeriesOption } from "echarts";

import { checkColumns, ContractError, FigureKind } from "./contracts";
import { num, readCsv, Table } from "./csv";

export interface FigureSpec {
  figureKind: FigureKind;
  inputCsv: string;
  outputImage: string;
  width?: number;
  height?: number;
}

const AXIS_LABELS: Record<FigureKind, { x: string; y: string }> = {
  lineshapes: { x: "Raman detuning [Hz]", y: "two-photon absorption" },
  width_sweep: { x: "angle [mrad]", y: "FWHM [Hz]" },
  amplitude_sweep: { x: "angle [mrad]", y: "relative amplitude" },
  imaging: { x: "radius [m]", y: "intensity" },
};

function baseOption(kind: FigureKind, legend: string[]): EChartsOption {
  return {
    animation: false,
    backgroundColor: "#ffffff",
    legend: { data: legend, top: 8 },
    grid: { left: 70, right: 24, top: 48, bottom: 48 },
    xAxis: { type: "value", name: AXIS_LABELS[kind].x, nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: AXIS_LABELS[kind].y, nameLocation: "middle", nameGap: 52 },
  };
}

function pairs(table: Table, x: string, y: string): [number, number][] {
  return table.rows
    .map((row) => [num(row, x), num(row, y)] as [number, number])
    .filter(([a, b]) => Number.isFinite(a) && Number.isFinite(b));
}

function lineshapesOption(table: Table): EChartsOption {
  const thetas: number[] = [];
  for (const row of table.rows) {
    const theta = num(row, "theta_mrad");
    if (!thetas.includes(theta)) thetas.push(theta);
  }
  const series: SeriesOption[] = thetas.map((theta) => ({
    type: "line",
    name: `${theta} mrad`,
    showSymbol: false,
    data: table.rows
      .filter((row) => num(row, "theta_mrad") === theta)
      .map((row) => [num(row, "detuning_hz"), num(row, "s2_value")]),
  }));
  return { ...baseOption("lineshapes", thetas.map((t) => `${t} mrad`)), series };
}

function widthSweepOption(table: Table): EChartsOption {
  const legend = ["theory", "fit", "model-free"];
  const series: SeriesOption[] = [
    { type: "line", name: "theory", showSymbol: false, data: pairs(table, "theta_mrad", "fwhm_theory_hz") },
    { type: "scatter", name: "fit", symbol: "circle", data: pairs(table, "theta_mrad", "fwhm_fit_hz") },
    { type: "scatter", name: "model-free", symbol: "diamond", data: pairs(table, "theta_mrad", "fwhm_numeric_hz") },
  ];
  if (table.columns.includes("fwhm_mc_hz")) {
    legend.push("Monte-Carlo");
    series.push({
      type: "scatter",
      name: "Monte-Carlo",
      symbol: "triangle",
      data: pairs(table, "theta_mrad", "fwhm_mc_hz"),
    });
  }
  return { ...baseOption("width_sweep", legend), series };
}

function amplitudeSweepOption(table: Table): EChartsOption {
  const legend = ["theory"];
  const series: SeriesOption[] = [
    { type: "line", name: "theory", showSymbol: false, data: pairs(table, "theta_mrad", "amplitude_ratio") },
  ];
  if (table.columns.includes("recovered_ratio")) {
    legend.push("imaging");
    series.push({
      type: "scatter",
      name: "imaging",
      symbol: "triangle",
      data: pairs(table, "theta_mrad", "recovered_ratio"),
    });
  }
  return { ...baseOption("amplitude_sweep", legend), series };
}

function imagingOption(table: Table): EChartsOption {
  const legend = ["input", "off resonance", "EIT"];
  const series: SeriesOption[] = [
    { type: "line", name: "input", showSymbol: false, data: pairs(table, "radius_m", "input") },
    { type: "line", name: "off resonance", showSymbol: false, data: pairs(table, "radius_m", "off_resonance") },
    { type: "line", name: "EIT", showSymbol: false, data: pairs(table, "radius_m", "eit") },
  ];
  return { ...baseOption("imaging", legend), series };
}

const BUILDERS: Record<FigureKind, (table: Table) => EChartsOption> = {
  lineshapes: lineshapesOption,
  width_sweep: widthSweepOption,
  amplitude_sweep: amplitudeSweepOption,
  imaging: imagingOption,
};

/** Build the chart option for a validated table (exposed for tests). */
export function buildOption(kind: FigureKind, table: Table): EChartsOption {
  checkColumns(kind, table.columns);
  if (table.rows.length === 0) {
    throw new ContractError(`no data rows for figure kind '${kind}'`);
  }
  return BUILDERS[kind](table);
}

/** Render an option to an SVG string (no DOM; server-side renderer). */
export function renderSvg(option: EChartsOption, width = 800, height = 560): string {
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

/**
 * Read the CSV, validate its columns against the figure kind, and write
 * the rendered SVG. The output file is only created on success.
 */
export function render(spec: FigureSpec): void {
  const table = readCsv(spec.inputCsv);
  const option = buildOption(spec.figureKind, table);
  const svg = renderSvg(option, spec.width, spec.height);
  fs.mkdirSync(path.dirname(path.resolve(spec.outputImage)), { recursive: true });
  fs.writeFileSync(spec.outputImage, svg, "utf-8");
}
