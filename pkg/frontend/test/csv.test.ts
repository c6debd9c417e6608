import { describe, expect, it } from "vitest";

import { column, parseCsv, SchemaError } from "../src/csv.js";

const GOOD = "t,sz_fict\n0.0,1.0\n0.05,0.99\n";

describe("parseCsv", () => {
  it("parses header and numeric rows", () => {
    const table = parseCsv(GOOD);
    expect(table.header).toEqual(["t", "sz_fict"]);
    expect(table.rows).toEqual([
      [0.0, 1.0],
      [0.05, 0.99],
    ]);
  });

  it("rejects an empty body", () => {
    expect(() => parseCsv("t,sz_fict\n")).toThrow(SchemaError);
    expect(() => parseCsv("t,sz_fict\n")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1.0\n")).toThrow(/row 1/);
  });

  it("rejects non-numeric cells", () => {
    expect(() => parseCsv("a,b\n1.0,oops\n")).toThrow(/non-numeric/);
  });

  it("parses scientific notation as written by the simulator", () => {
    const table = parseCsv("t,v\n5.000000000000e-02,-3.233216932918e-05\n");
    expect(table.rows[0]![0]).toBeCloseTo(0.05, 12);
  });
});

describe("column", () => {
  it("extracts a named column", () => {
    expect(column(parseCsv(GOOD), "sz_fict")).toEqual([1.0, 0.99]);
  });

  it("names the missing column in the error", () => {
    expect(() => column(parseCsv(GOOD), "seff")).toThrow(/column 'seff' not found/);
  });
});
