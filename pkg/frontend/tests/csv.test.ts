import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { column, parseOutcomesCsv, rowFeatures } from '../src/csv.js';

const text = readFileSync(new URL('./fixtures/run1/outcomes.csv', import.meta.url), 'utf8');

describe('outcome table parsing', () => {
  const table = parseOutcomesCsv(text);

  it('reads every iteration row', () => {
    expect(table.rows).toHaveLength(60);
    expect(table.columns).toHaveLength(32);
  });

  it('keeps the documented column order', () => {
    expect(table.columns[0]).toBe('iteration');
    expect(table.columns[table.columns.length - 1]).toBe('turnover_ratio');
    expect(table.columns).toContain('total_emissions');
    expect(table.columns).toContain('total_cost');
  });

  it('extracts columns by name', () => {
    const iterations = column(table, 'iteration');
    expect(iterations).toEqual([...Array(60).keys()]);
    expect(() => column(table, 'no_such_column')).toThrow(/no column/);
  });

  it('exposes a row as named features', () => {
    const features = rowFeatures(table, 0);
    expect(Object.keys(features)).toHaveLength(32);
    expect(features.iteration).toBe(0);
    expect(features.total_emissions).toBe(table.rows[0][table.columns.indexOf('total_emissions')]);
  });
});

describe('malformed documents', () => {
  it('rejects an empty document', () => {
    expect(() => parseOutcomesCsv('')).toThrow(/empty/);
  });

  it('rejects ragged rows with their line number', () => {
    expect(() => parseOutcomesCsv('a,b\n1,2\n3\n')).toThrow(/row 3/);
  });

  it('rejects non-numeric cells naming the column', () => {
    expect(() => parseOutcomesCsv('a,b\n1,soon\n')).toThrow(/b is not numeric/);
  });
});
