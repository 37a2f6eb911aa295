/**
 * Parser for the per-iteration outcome table served as CSV. Every cell is
 * numeric, so no quoting rules apply; the header row names the columns.
 */

export interface OutcomeTable {
  columns: string[];
  rows: number[][];
}

export function parseOutcomesCsv(text: string): OutcomeTable {
  const lines = text.split(/\r?\n/).filter((line) => line !== '');
  if (lines.length === 0) throw new Error('empty document');
  const columns = lines[0].split(',');
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== columns.length) {
      throw new Error(`row ${i + 1}: expected ${columns.length} cells, found ${cells.length}`);
    }
    const row = cells.map(Number);
    const bad = row.findIndex((v) => Number.isNaN(v));
    if (bad >= 0) {
      throw new Error(`row ${i + 1}: ${columns[bad]} is not numeric`);
    }
    rows.push(row);
  }
  return { columns, rows };
}

export function column(table: OutcomeTable, name: string): number[] {
  const index = table.columns.indexOf(name);
  if (index < 0) throw new Error(`no column named ${name}`);
  return table.rows.map((row) => row[index]);
}

/** Feature-name keyed view of one row, for feeding the regression model. */
export function rowFeatures(table: OutcomeTable, rowIndex: number): Record<string, number> {
  const features: Record<string, number> = {};
  const row = table.rows[rowIndex];
  table.columns.forEach((name, i) => {
    features[name] = row[i];
  });
  return features;
}
