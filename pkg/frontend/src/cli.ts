#!/usr/bin/env node
/**
 * figures <kind> --in <csv...> --out <img> [--xrange lo:hi] [--yrange lo:hi]
 *
 * kinds: speed_curves | phase_map | density_overlay | curve_labels
 * The output format follows the --out extension (.svg or .png); the
 * optional ranges override the automatic axis limits on every panel.
 * Exit codes: 0 ok, 2 bad arguments, 3 schema mismatch or I/O failure.
 */

import { realpathSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { fileURLToPath } from "node:url";

import {
  HIST_COLUMNS, LABEL_COLUMNS, Row, SCALING_COLUMNS, SPEED_COLUMNS,
  SchemaError, readTable,
} from "./csv.js";
import { curveLabels, densityOverlay, phaseMap, speedCurves } from "./figures.js";
import { Panel } from "./plot.js";
import { encodePng, rasterize } from "./png.js";
import { renderSvg } from "./svg.js";

const KINDS: Record<string, { columns: readonly string[]; build: (rows: Row[]) => Panel[] }> = {
  speed_curves: { columns: SPEED_COLUMNS, build: (rows) => speedCurves(rows).panels },
  phase_map: { columns: SCALING_COLUMNS, build: phaseMap },
  density_overlay: { columns: HIST_COLUMNS, build: densityOverlay },
  curve_labels: { columns: LABEL_COLUMNS, build: curveLabels },
};

const USAGE =
  "usage: figures <speed_curves|phase_map|density_overlay|curve_labels> " +
  "--in <csv...> --out <image.svg|image.png> [--xrange lo:hi] [--yrange lo:hi]";

function parseRange(raw: string): [number, number] | null {
  const parts = raw.split(":");
  if (parts.length !== 2) return null;
  const lo = Number(parts[0]);
  const hi = Number(parts[1]);
  if (parts[0] === "" || parts[1] === "" || !Number.isFinite(lo) || !Number.isFinite(hi)) {
    return null;
  }
  return lo < hi ? [lo, hi] : null;
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
        xrange: { type: "string" },
        yrange: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const kind = parsed.positionals[0];
  const inputs = parsed.values.in ?? [];
  const out = parsed.values.out;
  if (parsed.positionals.length !== 1 || !kind || !(kind in KINDS)) {
    console.error(USAGE);
    return 2;
  }
  if (inputs.length === 0 || !out) {
    console.error("error: need at least one --in file and an --out path");
    console.error(USAGE);
    return 2;
  }
  const format = out.endsWith(".svg") ? "svg" : out.endsWith(".png") ? "png" : null;
  if (!format) {
    console.error(`error: --out must end in .svg or .png, got ${out}`);
    return 2;
  }
  const ranges: { axis: "x" | "y"; span: [number, number] }[] = [];
  for (const axis of ["x", "y"] as const) {
    const raw = parsed.values[`${axis}range`];
    if (raw === undefined) continue;
    const span = parseRange(raw);
    if (!span) {
      console.error(`error: --${axis}range must be lo:hi with lo < hi, got ${raw}`);
      return 2;
    }
    ranges.push({ axis, span });
  }
  try {
    const spec = KINDS[kind] as (typeof KINDS)[string];
    const rows: Row[] = [];
    for (const path of inputs) rows.push(...readTable(path, spec.columns));
    const built = spec.build(rows);
    for (const { axis, span } of ranges) {
      for (const panel of built) {
        const a = panel.plot[axis];
        if (a.log && span[0] <= 0) {
          console.error(`error: --${axis}range on a log axis needs lo > 0, got ${span[0]}`);
          return 2;
        }
        [a.min, a.max] = span;
      }
    }
    if (format === "svg") writeFileSync(out, renderSvg(built), "utf8");
    else writeFileSync(out, encodePng(rasterize(built)));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 3;
    }
    if ((err as NodeJS.ErrnoException).code !== undefined) {
      console.error(`error: ${(err as Error).message}`);
      return 3;
    }
    throw err;
  }
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined && fileURLToPath(import.meta.url) === realpathSync(entry)) {
  process.exit(main(process.argv.slice(2)));
}
