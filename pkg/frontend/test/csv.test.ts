import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { SPEED_COLUMNS, SchemaError, levels, num, readTable } from "../src/csv.js";

const dir = mkdtempSync(join(tmpdir(), "figures-csv-"));

function file(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

const HEADER = SPEED_COLUMNS.join(",");
const ROW = "sse,0.8,0.7,1,1024,1000,0.123456789,0.002,0,7";

describe("readTable", () => {
  it("parses rows into column-keyed records", () => {
    const rows = readTable(file("ok.csv", `${HEADER}\n${ROW}\n`), SPEED_COLUMNS);
    expect(rows).toHaveLength(1);
    expect(rows[0]?.["env"]).toBe("sse");
    expect(rows[0]?.["v_n"]).toBe("0.123456789");
    expect(num(rows[0] ?? {}, "rho")).toBe(0.7);
  });

  it("treats one trailing newline as file termination, not an empty row", () => {
    const a = readTable(file("nl.csv", `${HEADER}\n${ROW}\n`), SPEED_COLUMNS);
    const b = readTable(file("nonl.csv", `${HEADER}\n${ROW}`), SPEED_COLUMNS);
    expect(a).toEqual(b);
  });

  it("accepts a header-only file as empty", () => {
    expect(readTable(file("empty.csv", `${HEADER}\n`), SPEED_COLUMNS)).toEqual([]);
  });

  it("names missing columns in the schema error", () => {
    const noSeed = HEADER.split(",").slice(0, -1).join(",");
    expect(() => readTable(file("miss.csv", `${noSeed}\n`), SPEED_COLUMNS)).toThrow(
      /missing columns: seed.*expected:/s,
    );
  });

  it("names unexpected columns in the schema error", () => {
    expect(() => readTable(file("extra.csv", `${HEADER},bogus\n`), SPEED_COLUMNS)).toThrow(
      /unexpected columns: bogus/,
    );
  });

  it("reports the line number of a ragged row", () => {
    const path = file("ragged.csv", `${HEADER}\n${ROW}\nsse,0.8\n`);
    expect(() => readTable(path, SPEED_COLUMNS)).toThrow(/:3: 2 fields, header has 10/);
  });

  it("propagates a missing file as an I/O error, not a schema error", () => {
    expect(() => readTable(join(dir, "nope.csv"), SPEED_COLUMNS)).toThrow(/ENOENT/);
  });
});

describe("num and levels", () => {
  const rows = readTable(
    file(
      "lv.csv",
      `${HEADER}\n` +
        "sse,0.8,0.9,1,1024,1000,0.1,0.002,0,7\n" +
        "sse,0.8,0.5,1,1024,1000,0.2,0.002,0,7\n" +
        "sse,0.8,0.9,1,2048,1000,0.3,0.002,0,7\n",
    ),
    SPEED_COLUMNS,
  );

  it("returns distinct numeric levels in ascending order", () => {
    expect(levels(rows, "rho")).toEqual([0.5, 0.9]);
    expect(levels(rows, "p")).toEqual([0.8]);
  });

  it("rejects empty and non-numeric cells", () => {
    expect(() => num({ v_n: "" }, "v_n")).toThrow(SchemaError);
    expect(() => num({ v_n: "fast" }, "v_n")).toThrow(/expected a number/);
    expect(() => num({}, "v_n")).toThrow(SchemaError);
  });
});
