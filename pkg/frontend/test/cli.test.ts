import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";
import { SPEED_COLUMNS } from "../src/csv.js";

const dir = mkdtempSync(join(tmpdir(), "figures-cli-"));

const SPEED_CSV = join(dir, "speed.csv");
writeFileSync(
  SPEED_CSV,
  `${SPEED_COLUMNS.join(",")}\n` +
    "sse,0.8,0.6,1,1024,1000,0.05,0.002,0,7\n" +
    "sse,0.8,0.7,1,1024,1000,0.1,0.002,0,7\n" +
    "sse,0.8,0.8,1,1024,1000,0.2,0.002,0,7\n",
);

const LABELS_CSV = join(dir, "labels.csv");
writeFileSync(LABELS_CSV, "env,rho,gamma,label,seed\nsse,0.7,1,m,7\nsse,0.8,1,c,7\n");

let stderr: string[];

beforeEach(() => {
  stderr = [];
  vi.spyOn(console, "error").mockImplementation((...args: unknown[]) => {
    stderr.push(args.join(" "));
  });
});

afterEach(() => {
  vi.restoreAllMocks();
});

describe("argument validation", () => {
  it("rejects an unknown kind", () => {
    expect(main(["scatter", "--in", SPEED_CSV, "--out", join(dir, "x.svg")])).toBe(2);
    expect(stderr.join("\n")).toContain("usage:");
  });

  it("rejects a missing kind or extra positionals", () => {
    expect(main(["--in", SPEED_CSV, "--out", join(dir, "x.svg")])).toBe(2);
    expect(main(["speed_curves", "extra", "--in", SPEED_CSV, "--out", join(dir, "x.svg")])).toBe(2);
  });

  it("requires at least one input and an output", () => {
    expect(main(["speed_curves", "--out", join(dir, "x.svg")])).toBe(2);
    expect(main(["speed_curves", "--in", SPEED_CSV])).toBe(2);
  });

  it("rejects unknown flags", () => {
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", join(dir, "x.svg"), "--zoom"])).toBe(2);
  });

  it("accepts only .svg and .png outputs", () => {
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", join(dir, "x.txt")])).toBe(2);
    expect(stderr.join("\n")).toContain(".svg or .png");
  });

  it("rejects malformed or empty axis ranges", () => {
    const base = ["speed_curves", "--in", SPEED_CSV, "--out", join(dir, "x.svg")];
    expect(main([...base, "--xrange", "0.9"])).toBe(2);
    expect(main([...base, "--xrange", "a:b"])).toBe(2);
    expect(main([...base, "--yrange", "1:1"])).toBe(2);
    expect(stderr.join("\n")).toContain("lo:hi");
  });

  it("rejects a non-positive lower bound on a log axis", () => {
    const gammaCsv = join(dir, "gamma.csv");
    writeFileSync(
      gammaCsv,
      `${SPEED_COLUMNS.join(",")}\n` +
        "sse,0.8,0.8,0.1,512,1000,0.18,0.002,0,7\n" +
        "sse,0.8,0.8,10,512,1000,0.33,0.002,0,7\n",
    );
    expect(main(["speed_curves", "--in", gammaCsv, "--out", join(dir, "g.svg"), "--xrange", "0:10"])).toBe(2);
    expect(stderr.join("\n")).toContain("log axis");
  });
});

describe("rendering", () => {
  it("writes an svg document and exits 0", () => {
    const out = join(dir, "curve.svg");
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8").startsWith("<svg ")).toBe(true);
  });

  it("writes a png image and exits 0", () => {
    const out = join(dir, "curve.png");
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", out])).toBe(0);
    expect([...readFileSync(out).subarray(0, 4)]).toEqual([137, 80, 78, 71]);
  });

  it("produces byte-identical output on reruns", () => {
    const a = join(dir, "a.png");
    const b = join(dir, "b.png");
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", a])).toBe(0);
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", b])).toBe(0);
    expect(readFileSync(a).equals(readFileSync(b))).toBe(true);
  });

  it("merges several input files into one figure", () => {
    const second = join(dir, "speed2.csv");
    writeFileSync(
      second,
      `${SPEED_COLUMNS.join(",")}\nsse,0.8,0.9,1,1024,1000,0.3,0.002,0,7\n`,
    );
    const out = join(dir, "merged.svg");
    expect(main(["speed_curves", "--in", SPEED_CSV, "--in", second, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("0.9");
  });

  it("renders curve labels from the labels schema", () => {
    const out = join(dir, "labels.svg");
    expect(main(["curve_labels", "--in", LABELS_CSV, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf8")).toContain(">m</text>");
  });

  it("applies axis range overrides to the rendered figure", () => {
    const auto = join(dir, "auto.svg");
    const wide = join(dir, "wide.svg");
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", auto])).toBe(0);
    // parseArgs needs the = form when a value starts with a dash
    expect(
      main(["speed_curves", "--in", SPEED_CSV, "--out", wide, "--xrange", "0:1", "--yrange=-1:1"]),
    ).toBe(0);
    expect(readFileSync(wide, "utf8")).not.toBe(readFileSync(auto, "utf8"));
    expect(readFileSync(wide, "utf8")).toContain(">-1</text>");
  });
});

describe("failure paths", () => {
  it("exits 3 with column diagnostics on a schema mismatch", () => {
    expect(main(["speed_curves", "--in", LABELS_CSV, "--out", join(dir, "x.svg")])).toBe(3);
    expect(stderr.join("\n")).toContain("missing columns");
  });

  it("exits 3 when an input file does not exist", () => {
    expect(main(["speed_curves", "--in", join(dir, "ghost.csv"), "--out", join(dir, "x.svg")])).toBe(3);
  });

  it("exits 3 when the output directory does not exist", () => {
    expect(main(["speed_curves", "--in", SPEED_CSV, "--out", join(dir, "no", "dir", "x.svg")])).toBe(3);
  });
});
