/**
 * The four figure kinds, assembled from parsed CSV rows.
 *
 * speed_curves  speed against the varying parameter, solid curves per
 *               group, dashed closed-form envelopes (frozen field below,
 *               averaged medium above)
 * phase_map     cross / dot / square glyphs on the (p, rho) plane
 * density_overlay  rescaled endpoint densities per slice, two panels:
 *               at the estimated exponent and at 1/2
 * curve_labels  m / c / + letters on the (parameter, density) plane
 */

import { Row, SchemaError, levels, num } from "./csv.js";
import {
  Axis, PALETTE, Panel, PlotModel, Shape, expandAxis, panels,
} from "./plot.js";
import { averagedSpeed, staticSpeed } from "./theory.js";

const SYMBOL_COLOR: Record<string, string> = {
  cross: "#1f77b4",
  dot: "#d62728",
  square: "#2ca02c",
};

const LABEL_COLOR: Record<string, string> = {
  m: "#2ca02c",
  c: "#1f77b4",
  "+": "#d62728",
};

export interface SpeedCurve {
  label: string;
  color: string;
  xs: number[];
  vs: number[];
  ses: number[];
}

export interface SpeedCurvesFigure {
  xColumn: "p" | "rho" | "gamma";
  curves: SpeedCurve[];
  lower: (x: number) => number;
  upper: (x: number) => number;
  panels: Panel[];
}

function byKey(rows: Row[], columns: string[]): Map<string, Row[]> {
  const out = new Map<string, Row[]>();
  for (const r of rows) {
    const key = columns.map((c) => r[c]).join(",");
    const bucket = out.get(key);
    if (bucket) bucket.push(r);
    else out.set(key, [r]);
  }
  return out;
}

/** Speed curve family with dashed envelopes from the closed forms. */
export function speedCurves(rows: Row[]): SpeedCurvesFigure {
  if (rows.length === 0) throw new SchemaError("speed_curves: no data rows");
  const varying = (["rho", "p", "gamma"] as const).filter((c) => levels(rows, c).length > 1);
  const xColumn = varying[0] ?? "rho";
  for (const c of ["p", "rho"] as const) {
    if (c !== xColumn && levels(rows, c).length > 1) {
      throw new SchemaError(
        `speed_curves: both ${xColumn} and ${c} vary; envelopes need a fixed ${c}`,
      );
    }
  }
  const p0 = num(rows[0] as Row, "p");
  const rho0 = num(rows[0] as Row, "rho");
  const lower = (x: number) =>
    xColumn === "p" ? staticSpeed(x, rho0) : xColumn === "rho" ? staticSpeed(p0, x) : staticSpeed(p0, rho0);
  const upper = (x: number) =>
    xColumn === "p" ? averagedSpeed(x, rho0) : xColumn === "rho" ? averagedSpeed(p0, x) : averagedSpeed(p0, rho0);

  const groupCols = ["env", "p", "rho", "gamma"].filter((c) => c !== xColumn);
  const curves: SpeedCurve[] = [];
  const grouped = [...byKey(rows, groupCols).entries()].sort();
  for (const [key, members] of grouped) {
    members.sort((a, b) => num(a, xColumn) - num(b, xColumn));
    curves.push({
      label: groupCols.map((c, i) => `${c}=${key.split(",")[i]}`).join(" "),
      color: PALETTE[curves.length % PALETTE.length] as string,
      xs: members.map((r) => num(r, xColumn)),
      vs: members.map((r) => num(r, "v_n")),
      ses: members.map((r) => num(r, "stderr")),
    });
  }

  const xsAll = curves.flatMap((c) => c.xs);
  const [xMin, xMax] = expandAxis(Math.min(...xsAll), Math.max(...xsAll));
  const x: Axis = { label: xColumn, min: xMin, max: xMax, log: xColumn === "gamma" };
  if (x.log) [x.min, x.max] = [Math.min(...xsAll) / 1.5, Math.max(...xsAll) * 1.5];

  const envelopeXs: number[] = [];
  if (xColumn === "gamma") {
    envelopeXs.push(x.min, x.max);
  } else {
    // padding can push the axis past the closed forms' domain; sample inside it
    const lo = Math.max(x.min, xColumn === "p" ? 1e-9 : 0);
    const hi = Math.min(x.max, xColumn === "p" ? 1 - 1e-9 : 1);
    for (let i = 0; i <= 200; i++) envelopeXs.push(lo + (i / 200) * (hi - lo));
  }
  const shapes: Shape[] = [
    { kind: "polyline", xs: envelopeXs, ys: envelopeXs.map(lower), color: "#000000", dashed: true },
    { kind: "polyline", xs: envelopeXs, ys: envelopeXs.map(upper), color: "#000000", dashed: true },
  ];
  for (const c of curves) {
    shapes.push({ kind: "polyline", xs: c.xs, ys: c.vs, color: c.color });
    for (let i = 0; i < c.xs.length; i++) {
      shapes.push({ kind: "marker", x: c.xs[i] as number, y: c.vs[i] as number, glyph: "dot", color: c.color });
    }
  }
  const ysAll = shapes.flatMap((s) => (s.kind === "polyline" ? s.ys : []));
  const [yMin, yMax] = expandAxis(Math.min(...ysAll), Math.max(...ysAll));
  const plot: PlotModel = {
    title: `speed against ${xColumn}`,
    x,
    y: { label: "v_n", min: yMin, max: yMax },
    shapes,
    legend: [
      ...curves.map((c) => ({ label: c.label, color: c.color })),
      { label: "frozen field", color: "#000000", dashed: true },
      { label: "averaged medium", color: "#000000", dashed: true },
    ],
  };
  return { xColumn, curves, lower, upper, panels: panels([plot]) };
}

/** Glyph map of scaling symbols on the (p, rho) plane. */
export function phaseMap(rows: Row[]): Panel[] {
  if (rows.length === 0) throw new SchemaError("phase_map: no data rows");
  const cells = [...byKey(rows, ["p", "rho"]).entries()].sort();
  const shapes: Shape[] = [];
  const seen = new Set<string>();
  for (const [, members] of cells) {
    const r = members[0] as Row;
    const symbol = r["symbol"] ?? "";
    if (!(symbol in SYMBOL_COLOR)) {
      throw new SchemaError(`phase_map: unknown symbol ${JSON.stringify(symbol)}`);
    }
    seen.add(symbol);
    shapes.push({
      kind: "marker",
      x: num(r, "p"),
      y: num(r, "rho"),
      glyph: symbol as "cross" | "dot" | "square",
      color: SYMBOL_COLOR[symbol] as string,
    });
  }
  const [xMin, xMax] = expandAxis(Math.min(...levels(rows, "p")), Math.max(...levels(rows, "p")));
  const [yMin, yMax] = expandAxis(Math.min(...levels(rows, "rho")), Math.max(...levels(rows, "rho")));
  const plot: PlotModel = {
    title: "scaling regimes",
    x: { label: "p", min: xMin, max: xMax },
    y: { label: "rho", min: yMin, max: yMax },
    shapes,
    legend: [...seen].sort().map((s) => ({ label: s, color: SYMBOL_COLOR[s] as string })),
  };
  return panels([plot]);
}

interface DensityCurve {
  N: number;
  color: string;
  centers: number[];
  density: number[];
}

function densityPanel(curves: DensityCurve[], title: string): PlotModel {
  const shapes: Shape[] = curves.map((c) => ({
    kind: "polyline", xs: c.centers, ys: c.density, color: c.color,
  }));
  const xsAll = curves.flatMap((c) => c.centers);
  const ysAll = curves.flatMap((c) => c.density);
  const [xMin, xMax] = expandAxis(Math.min(...xsAll), Math.max(...xsAll));
  const [, yMax] = expandAxis(0, Math.max(...ysAll));
  return {
    title,
    x: { label: "rescaled endpoint", min: xMin, max: xMax },
    y: { label: "density", min: 0, max: yMax },
    shapes,
    legend: curves.map((c) => ({ label: `N=${c.N}`, color: c.color })),
  };
}

/**
 * Rescaled endpoint densities per slice.  Left panel: as produced (the
 * estimated exponent).  Right panel: the same histograms re-expressed
 * at exponent 1/2, which separates them when the walk is anomalous.
 */
export function densityOverlay(rows: Row[]): Panel[] {
  if (rows.length === 0) throw new SchemaError("density_overlay: no data rows");
  const alpha = num(rows[0] as Row, "alpha");
  const slices = [...byKey(rows, ["N"]).entries()]
    .sort((a, b) => Number(a[0]) - Number(b[0]));
  const at: DensityCurve[] = [];
  const atHalf: DensityCurve[] = [];
  slices.forEach(([key, members], i) => {
    const N = Number(key);
    const color = PALETTE[i % PALETTE.length] as string;
    const centers: number[] = [];
    const density: number[] = [];
    for (const r of members) {
      const left = num(r, "bin_left");
      const right = num(r, "bin_right");
      centers.push((left + right) / 2);
      density.push(num(r, "mass") / (right - left));
    }
    at.push({ N, color, centers, density });
    // moving mass to exponent 1/2 stretches the axis by n^(alpha - 1/2)
    const f = (2 ** N) ** (alpha - 0.5);
    atHalf.push({
      N, color,
      centers: centers.map((c) => c * f),
      density: density.map((d) => d / f),
    });
  });
  return panels([
    densityPanel(at, `alpha = ${alpha}`),
    densityPanel(atHalf, "alpha = 0.5"),
  ]);
}

/** m / c / + letters for curve shapes over the parameter plane. */
export function curveLabels(rows: Row[]): Panel[] {
  if (rows.length === 0) throw new SchemaError("curve_labels: no data rows");
  const gammas = levels(rows, "gamma");
  const useGammaX = gammas.length > 1;
  const logX = useGammaX && (gammas[0] as number) > 0;
  const shapes: Shape[] = [];
  const seen = new Set<string>();
  for (const r of rows) {
    const label = r["label"] ?? "";
    if (!(label in LABEL_COLOR)) {
      throw new SchemaError(`curve_labels: unknown label ${JSON.stringify(label)}`);
    }
    seen.add(label);
    shapes.push({
      kind: "glyphtext",
      x: useGammaX ? num(r, "gamma") : num(r, "rho"),
      y: useGammaX ? num(r, "rho") : num(r, "gamma"),
      text: label,
      color: LABEL_COLOR[label] as string,
    });
  }
  const xs = shapes.map((s) => (s.kind === "glyphtext" ? s.x : 0));
  const ys = shapes.map((s) => (s.kind === "glyphtext" ? s.y : 0));
  const [xMin, xMax] = expandAxis(Math.min(...xs), Math.max(...xs));
  const [yMin, yMax] = expandAxis(Math.min(...ys), Math.max(...ys));
  const x: Axis = {
    label: useGammaX ? "gamma" : "rho",
    min: logX ? Math.min(...xs) / 1.5 : xMin,
    max: logX ? Math.max(...xs) * 1.5 : xMax,
    log: logX,
  };
  const plot: PlotModel = {
    title: "speed curve shapes",
    x,
    y: { label: useGammaX ? "rho" : "gamma", min: yMin, max: yMax },
    shapes,
    legend: [...seen].sort().map((l) => ({ label: l, color: LABEL_COLOR[l] as string })),
  };
  return panels([plot]);
}
