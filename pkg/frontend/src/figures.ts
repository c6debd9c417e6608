/** Figure builders over the simulator's trajectory and benchmark CSVs.
 * All numbers come straight from the input files; nothing is recomputed. */

import { readFileSync } from "fs";

import { column, parseCsv, SchemaError, Table } from "./csv.js";
import { BarChart, LinePanel, renderBarFigure, renderLineFigure, Series } from "./svg.js";

export interface TrajectoryInput {
  beta: number;
  path: string;
  table: Table;
}

const BETA_FROM_NAME = /_beta_(-?\d+(?:\.\d+)?(?:e-?\d+)?)\.csv$/;

/** Accepts "<beta>:<path>" or a bare path named like "..._beta_<b>.csv". */
export function parseInputArg(arg: string): { beta: number; path: string } {
  const sep = arg.indexOf(":");
  if (sep > 0) {
    const beta = Number(arg.slice(0, sep));
    if (Number.isFinite(beta)) {
      return { beta, path: arg.slice(sep + 1) };
    }
  }
  const match = BETA_FROM_NAME.exec(arg);
  if (match) {
    return { beta: Number(match[1]), path: arg };
  }
  throw new SchemaError(
    `cannot infer beta for input '${arg}'; use '<beta>:<path>' or a '..._beta_<b>.csv' filename`,
  );
}

export function loadTrajectories(args: string[]): TrajectoryInput[] {
  const inputs = args.map((arg) => {
    const { beta, path } = parseInputArg(arg);
    const table = parseCsv(readFileSync(path, "utf8"));
    return { beta, path, table };
  });
  inputs.sort((a, b) => a.beta - b.beta);
  return inputs;
}

function seriesFor(inputs: TrajectoryInput[], columnName: string): Series[] {
  return inputs.map((input) => ({
    label: `beta = ${input.beta}`,
    x: column(input.table, "t"),
    y: column(input.table, columnName),
    emphasis: input.beta === 0,
  }));
}

export function polarizationFigure(inputs: TrajectoryInput[], columns?: string[]): string {
  const [szCol, reCol] = columns && columns.length === 2 ? columns : ["sz_recovered", "re_rho01_recovered"];
  const panels: LinePanel[] = [
    {
      title: "Recovered polarization",
      xLabel: "t (1/delta)",
      yLabel: szCol!,
      series: seriesFor(inputs, szCol!),
    },
    {
      title: "Recovered coherence (real part)",
      xLabel: "t (1/delta)",
      yLabel: reCol!,
      series: seriesFor(inputs, reCol!),
    },
  ];
  return renderLineFigure(panels);
}

export function fictitiousFigure(inputs: TrajectoryInput[], columns?: string[]): string {
  const col = columns?.[0] ?? "sz_fict";
  const panel: LinePanel = {
    title: "Fictitious polarization (no recovery)",
    xLabel: "t (1/delta)",
    yLabel: col,
    series: seriesFor(inputs, col),
  };
  return renderLineFigure([panel]);
}

export function entanglementFigure(inputs: TrajectoryInput[], columns?: string[]): string {
  const col = columns?.[0] ?? "seff";
  const panel: LinePanel = {
    title: "Effective entanglement growth",
    xLabel: "t (1/delta)",
    yLabel: col,
    series: seriesFor(inputs, col),
  };
  return renderLineFigure([panel]);
}

export function ghzFigure(path: string): string {
  const table = parseCsv(readFileSync(path, "utf8"));
  const k = column(table, "k");
  const mps = column(table, "seff_mps");
  const closed = column(table, "seff_closed_form");
  const chart: BarChart = {
    title: "GHZ effective entanglement vs transformed spins",
    xLabel: "number of transformed spins k",
    yLabel: "S_eff",
    labels: k.map((v) => String(v)),
    values: mps,
    overlay: { label: "closed form", values: closed },
  };
  return renderBarFigure(chart);
}
