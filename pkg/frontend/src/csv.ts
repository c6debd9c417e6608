/** Strict reader for the simulator's numeric CSV outputs. */

export class SchemaError extends Error {}

export interface Table {
  header: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text
    .trim()
    .split(/\r?\n/)
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("CSV is empty");
  }
  const header = lines[0]!.split(",");
  if (lines.length === 1) {
    throw new SchemaError("CSV has a header but no data rows");
  }
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `row ${i + 1} has ${cells.length} cells but the header has ${header.length}`,
      );
    }
    return cells.map((cell) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new SchemaError(`non-numeric cell '${cell}' in row ${i + 1}`);
      }
      return value;
    });
  });
  return { header, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`column '${name}' not found (header: ${table.header.join(", ")})`);
  }
  return table.rows.map((row) => row[idx]!);
}
