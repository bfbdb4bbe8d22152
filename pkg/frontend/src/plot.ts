/**
 * Tiny deterministic plotting core.
 *
 * Figures are assembled as a list of shapes in data coordinates plus an
 * axes description; the SVG and PNG backends both consume that model,
 * so the two outputs always show the same geometry.  Everything is a
 * pure function of its inputs: fixed canvas size, fixed fonts, fixed
 * palette, coordinates formatted to two decimals.
 */

export const WIDTH = 800;
export const HEIGHT = 600;
export const MARGIN = { left: 70, right: 20, top: 40, bottom: 50 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
] as const;

export interface Axis {
  label: string;
  min: number;
  max: number;
  log?: boolean; // ticks and mapping in log10 space
}

export type Shape =
  | { kind: "polyline"; xs: number[]; ys: number[]; color: string; dashed?: boolean }
  | { kind: "marker"; x: number; y: number; glyph: "cross" | "dot" | "square"; color: string }
  | { kind: "glyphtext"; x: number; y: number; text: string; color: string };

export interface PlotModel {
  title: string;
  x: Axis;
  y: Axis;
  shapes: Shape[];
  legend: { label: string; color: string; dashed?: boolean }[];
}

export interface Panel {
  plot: PlotModel;
  x0: number; // canvas offset of this panel
  width: number;
}

/** Lay out one or two plots side by side on the fixed canvas. */
export function panels(plots: PlotModel[]): Panel[] {
  const w = WIDTH / plots.length;
  return plots.map((plot, i) => ({ plot, x0: i * w, width: w }));
}

export function expandAxis(min: number, max: number): [number, number] {
  if (min === max) return [min - 0.5, max + 0.5];
  const pad = 0.05 * (max - min);
  return [min - pad, max + pad];
}

function axisValue(axis: Axis, v: number): number {
  return axis.log ? Math.log10(v) : v;
}

/** Data-to-canvas mapping for a panel. */
export function mapper(panel: Panel) {
  const { plot, x0, width } = panel;
  const xa = axisValue(plot.x, plot.x.min);
  const xb = axisValue(plot.x, plot.x.max);
  const ya = axisValue(plot.y, plot.y.min);
  const yb = axisValue(plot.y, plot.y.max);
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  return {
    x: (v: number) => x0 + MARGIN.left + ((axisValue(plot.x, v) - xa) / (xb - xa)) * innerW,
    y: (v: number) => HEIGHT - MARGIN.bottom - ((axisValue(plot.y, v) - ya) / (yb - ya)) * innerH,
  };
}

/** Round tick positions covering [min, max]; log axes tick at powers of 10. */
export function ticks(axis: Axis, count = 6): number[] {
  if (axis.log) {
    const lo = Math.ceil(Math.log10(axis.min) - 1e-9);
    const hi = Math.floor(Math.log10(axis.max) + 1e-9);
    const out: number[] = [];
    for (let e = lo; e <= hi; e++) out.push(10 ** e);
    return out.length >= 2 ? out : [axis.min, axis.max];
  }
  const span = axis.max - axis.min;
  const raw = span / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? mag * 10;
  const first = Math.ceil(axis.min / step) * step;
  const out: number[] = [];
  for (let v = first; v <= axis.max + 1e-9 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return String(Math.round(v * 1e6) / 1e6);
}
