import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { EncodingMismatch, predict, predictWithBand, requiredFeatures } from '../src/model.js';
import { isFittedModel } from '../src/types.js';
import type { FittedModelDoc, ModelDoc } from '../src/types.js';

function loadJson<T>(relative: string): T {
  return JSON.parse(readFileSync(new URL(relative, import.meta.url), 'utf8')) as T;
}

const exactModel = loadJson<FittedModelDoc>('./fixtures/model_exact.json');
const trainingRows = loadJson<Array<{ features: Record<string, number>; target: number }>>(
  './fixtures/model_exact_rows.json',
);
const runModel = loadJson<ModelDoc>('./fixtures/run1/model.json');

describe('exact-fit evaluation', () => {
  it('reproduces every training target from a noiseless fit', () => {
    expect(exactModel.r_squared).toBeCloseTo(1.0, 12);
    for (const row of trainingRows) {
      expect(Math.abs(predict(exactModel, row.features) - row.target)).toBeLessThan(1e-8);
    }
  });

  it('keeps the band negligible on a noiseless fit', () => {
    const band = predictWithBand(exactModel, trainingRows[0].features);
    expect(band.residualStd).toBeLessThan(1e-9);
    expect(band.high - band.low).toBeLessThan(1e-8);
  });
});

describe('document evaluation', () => {
  const doc: FittedModelDoc = {
    target: 'total_emissions',
    columns: ['intercept', 'a', 'b', 'a*b'],
    coefficients: [1.0, 2.0, 3.0, -0.5],
    r_squared: 0.9,
    residual_std: 2.0,
    standard_errors: [0.1, 0.1, 0.1, 0.1],
    n_observations: 40,
  };

  it('computes interaction columns from their parts', () => {
    // 1 + 2*1.5 + 3*(-2) - 0.5*1.5*(-2)
    expect(predict(doc, { a: 1.5, b: -2 })).toBeCloseTo(-0.5, 12);
  });

  it('lists required features with interactions unpacked', () => {
    expect(requiredFeatures(doc)).toEqual(['a', 'b']);
  });

  it('ignores extra features and rejects missing ones', () => {
    expect(predict(doc, { a: 1, b: 1, unrelated: 99 })).toBeCloseTo(5.5, 12);
    expect(() => predict(doc, { a: 1 })).toThrow(EncodingMismatch);
    try {
      predict(doc, { a: 1 });
    } catch (err) {
      expect((err as EncodingMismatch).missing).toEqual(['b']);
    }
  });

  it('brackets the point prediction with one sigma', () => {
    const band = predictWithBand(doc, { a: 0, b: 0 });
    expect(band.value).toBe(1);
    expect(band.low).toBe(-1);
    expect(band.high).toBe(3);
  });
});

describe('served model document', () => {
  it('is a fitted model whose features come from the outcome table', () => {
    expect(isFittedModel(runModel)).toBe(true);
    if (!isFittedModel(runModel)) return;
    const csv = readFileSync(new URL('./fixtures/run1/outcomes.csv', import.meta.url), 'utf8');
    const header = csv.slice(0, csv.indexOf('\n')).split(',');
    for (const feature of requiredFeatures(runModel)) {
      expect(header).toContain(feature);
    }
  });
});
