/**
 * Client-side evaluation of a served regression document. Mirrors the
 * server's encoding: an "intercept" column, feature columns by name, and
 * "a*b" interaction columns computed from their parts.
 */

import type { FittedModelDoc } from './types.js';

export const INTERCEPT = 'intercept';

export class EncodingMismatch extends Error {
  readonly missing: string[];

  constructor(missing: string[]) {
    super(`missing features: ${missing.join(', ')}`);
    this.name = 'EncodingMismatch';
    this.missing = missing;
  }
}

/** Every feature name the model needs, interaction parts unpacked. */
export function requiredFeatures(model: FittedModelDoc): string[] {
  const names = new Set<string>();
  for (const column of model.columns) {
    if (column === INTERCEPT) continue;
    for (const part of column.split('*')) names.add(part);
  }
  return [...names].sort();
}

export function predict(model: FittedModelDoc, features: Record<string, number>): number {
  const missing = requiredFeatures(model).filter((name) => !(name in features));
  if (missing.length > 0) throw new EncodingMismatch(missing);
  let value = 0;
  for (let i = 0; i < model.columns.length; i++) {
    const name = model.columns[i];
    const coef = model.coefficients[i];
    if (name === INTERCEPT) {
      value += coef;
      continue;
    }
    let term = 1;
    for (const part of name.split('*')) term *= features[part];
    value += coef * term;
  }
  return value;
}

export interface PredictionBand {
  value: number;
  low: number;
  high: number;
  residualStd: number;
}

/** Point prediction bracketed by the one-sigma residual band. */
export function predictWithBand(model: FittedModelDoc, features: Record<string, number>): PredictionBand {
  const value = predict(model, features);
  return {
    value,
    low: value - model.residual_std,
    high: value + model.residual_std,
    residualStd: model.residual_std,
  };
}
