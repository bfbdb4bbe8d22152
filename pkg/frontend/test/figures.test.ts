import { describe, expect, it } from "vitest";

import { Row, SchemaError } from "../src/csv.js";
import { curveLabels, densityOverlay, phaseMap, speedCurves } from "../src/figures.js";
import { averagedSpeed, staticSpeed } from "../src/theory.js";

function speedRow(over: Record<string, string>): Row {
  return {
    env: "sse", p: "0.8", rho: "0.7", gamma: "1", n: "1024", M: "1000",
    v_n: "0.1", stderr: "0.002", aborts: "0", seed: "7", ...over,
  };
}

function scalingRow(over: Record<string, string>): Row {
  return {
    env: "static", p: "0.8", rho: "0.7", gamma: "0", N: "12", n: "4096",
    M: "400", SD_n: "30.5", alpha_n: "0.5", alpha_star: "0.5",
    symbol: "cross", seed: "7", log2_nbar: "", ...over,
  };
}

describe("speedCurves", () => {
  it("groups a rho sweep into one curve per remaining parameter set", () => {
    const rows: Row[] = [];
    for (const gamma of ["1", "10"]) {
      for (const rho of ["0.8", "0.6", "0.7"]) {
        rows.push(speedRow({ gamma, rho, v_n: gamma === "1" ? "0.1" : "0.2" }));
      }
    }
    const fig = speedCurves(rows);
    expect(fig.xColumn).toBe("rho");
    expect(fig.curves).toHaveLength(2);
    expect(fig.curves.map((c) => c.label)).toEqual([
      "env=sse p=0.8 gamma=1",
      "env=sse p=0.8 gamma=10",
    ]);
    // members are sorted along the axis no matter the file order
    expect(fig.curves[0]?.xs).toEqual([0.6, 0.7, 0.8]);
    expect(fig.curves[0]?.ses).toEqual([0.002, 0.002, 0.002]);
    expect(fig.panels).toHaveLength(1);
  });

  it("exposes the closed forms as the envelope functions", () => {
    const rows = ["0.6", "0.7", "0.8"].map((rho) => speedRow({ rho }));
    const fig = speedCurves(rows);
    expect(fig.lower(0.75)).toBe(staticSpeed(0.8, 0.75));
    expect(fig.upper(0.75)).toBe(averagedSpeed(0.8, 0.75));
  });

  it("draws dashed envelopes below and above the axis range", () => {
    const rows = ["0.6", "0.7", "0.8"].map((rho) => speedRow({ rho }));
    const shapes = speedCurves(rows).panels[0]?.plot.shapes ?? [];
    const dashed = shapes.filter((s) => s.kind === "polyline" && s.dashed);
    expect(dashed).toHaveLength(2);
    expect(dashed[0]?.kind === "polyline" && dashed[0].xs).toHaveLength(201);
  });

  it("uses a log axis and flat envelopes for a gamma sweep", () => {
    const rows = ["0.1", "1", "10"].map((gamma) => speedRow({ gamma }));
    const fig = speedCurves(rows);
    expect(fig.xColumn).toBe("gamma");
    const plot = fig.panels[0]?.plot;
    expect(plot?.x.log).toBe(true);
    const dashed = plot?.shapes.filter((s) => s.kind === "polyline" && s.dashed) ?? [];
    for (const d of dashed) {
      if (d.kind !== "polyline") continue;
      expect(d.xs).toHaveLength(2);
      expect(d.ys[0]).toBe(d.ys[1]); // constant across gamma
    }
    expect(fig.lower(5)).toBe(staticSpeed(0.8, 0.7));
  });

  it("survives a single-point file without leaving the closed forms' domain", () => {
    const fig = speedCurves([speedRow({ rho: "0.97" })]);
    expect(fig.curves).toHaveLength(1);
    expect(fig.panels).toHaveLength(1);
  });

  it("rejects files where two of the physical axes vary at once", () => {
    const rows = [speedRow({}), speedRow({ rho: "0.9", p: "0.6" })];
    expect(() => speedCurves(rows)).toThrow(/both rho and p vary/);
  });

  it("rejects an empty table", () => {
    expect(() => speedCurves([])).toThrow(SchemaError);
  });
});

describe("phaseMap", () => {
  it("places one glyph per (p, rho) cell with the symbol's color", () => {
    const rows = [
      scalingRow({ p: "0.6", rho: "0.8", symbol: "cross", N: "10" }),
      scalingRow({ p: "0.6", rho: "0.8", symbol: "cross", N: "12" }),
      scalingRow({ p: "0.8", rho: "0.7", symbol: "dot" }),
      scalingRow({ p: "0.8", rho: "0.55", symbol: "square" }),
    ];
    const shapes = phaseMap(rows)[0]?.plot.shapes ?? [];
    expect(shapes).toHaveLength(3); // the two N slices collapse to one cell
    const byGlyph = new Map(
      shapes.map((s) => (s.kind === "marker" ? [s.glyph, s.color] : ["?", ""])),
    );
    expect(byGlyph.get("cross")).toBe("#1f77b4");
    expect(byGlyph.get("dot")).toBe("#d62728");
    expect(byGlyph.get("square")).toBe("#2ca02c");
  });

  it("rejects a symbol outside the legend", () => {
    expect(() => phaseMap([scalingRow({ symbol: "blob" })])).toThrow(/unknown symbol "blob"/);
  });

  it("maps a crosses-only table to a crosses-only figure", () => {
    const rows = [
      scalingRow({ p: "0.52", rho: "0.7" }),
      scalingRow({ p: "0.56", rho: "0.9" }),
    ];
    const plot = phaseMap(rows)[0]?.plot;
    expect(plot?.shapes.every((s) => s.kind === "marker" && s.glyph === "cross")).toBe(true);
    expect(plot?.legend.map((l) => l.label)).toEqual(["cross"]);
  });
});

function histRow(N: string, left: string, right: string, mass: string, alpha = "0.7"): Row {
  return {
    env: "sse", p: "0.8", rho: "0.75", gamma: "1", N, alpha,
    bin_left: left, bin_right: right, mass,
  };
}

describe("densityOverlay", () => {
  const rows = [
    // deliberately out of order: the N=6 slice first
    histRow("6", "-1", "0", "0.25"), histRow("6", "0", "1", "0.75"),
    histRow("4", "-1", "0", "0.25"), histRow("4", "0", "1", "0.75"),
  ];

  it("lays out two half-width panels", () => {
    const out = densityOverlay(rows);
    expect(out).toHaveLength(2);
    expect(out[0]?.x0).toBe(0);
    expect(out[0]?.width).toBe(400);
    expect(out[1]?.x0).toBe(400);
    expect(out[0]?.plot.title).toBe("alpha = 0.7");
    expect(out[1]?.plot.title).toBe("alpha = 0.5");
  });

  it("sorts slices by N and converts mass to density at bin centers", () => {
    const left = densityOverlay(rows)[0]?.plot;
    expect(left?.legend.map((l) => l.label)).toEqual(["N=4", "N=6"]);
    const first = left?.shapes[0];
    expect(first?.kind === "polyline" && first.xs).toEqual([-0.5, 0.5]);
    expect(first?.kind === "polyline" && first.ys).toEqual([0.25, 0.75]);
  });

  it("re-expresses the right panel at exponent 1/2", () => {
    const right = densityOverlay(rows)[1]?.plot;
    const first = right?.shapes[0]; // the N=4 slice
    const f = (2 ** 4) ** (0.7 - 0.5);
    if (first?.kind !== "polyline") throw new Error("expected a polyline");
    expect(first.xs[0]).toBeCloseTo(-0.5 * f, 12);
    expect(first.xs[1]).toBeCloseTo(0.5 * f, 12);
    expect(first.ys[0]).toBeCloseTo(0.25 / f, 12);
    expect(first.ys[1]).toBeCloseTo(0.75 / f, 12);
  });

  it("rejects an empty table", () => {
    expect(() => densityOverlay([])).toThrow(SchemaError);
  });
});

function labelRow(over: Record<string, string>): Row {
  return { env: "sse", rho: "0.7", gamma: "1", label: "m", seed: "7", ...over };
}

describe("curveLabels", () => {
  it("plots letters over (gamma, rho) on a log axis when gamma varies", () => {
    const rows = [
      labelRow({ gamma: "0.1", label: "m" }),
      labelRow({ gamma: "1", label: "c" }),
      labelRow({ gamma: "10", label: "+" }),
    ];
    const plot = curveLabels(rows)[0]?.plot;
    expect(plot?.x.label).toBe("gamma");
    expect(plot?.x.log).toBe(true);
    const texts = plot?.shapes.map((s) => (s.kind === "glyphtext" ? s.text : "?"));
    expect(texts).toEqual(["m", "c", "+"]);
  });

  it("falls back to rho on the x axis when gamma is fixed", () => {
    const rows = [labelRow({ rho: "0.6" }), labelRow({ rho: "0.8", label: "c" })];
    const plot = curveLabels(rows)[0]?.plot;
    expect(plot?.x.label).toBe("rho");
    expect(plot?.y.label).toBe("gamma");
    expect(plot?.x.log).toBeFalsy();
  });

  it("colors letters per the shape legend", () => {
    const plot = curveLabels([labelRow({ label: "+" })])[0]?.plot;
    const s = plot?.shapes[0];
    expect(s?.kind === "glyphtext" && s.color).toBe("#d62728");
  });

  it("rejects a label outside the legend", () => {
    expect(() => curveLabels([labelRow({ label: "z" })])).toThrow(/unknown label "z"/);
  });
});
