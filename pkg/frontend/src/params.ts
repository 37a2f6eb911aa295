/**
 * Parameter form state and its mapping to run configuration documents.
 *
 * The form holds strings, because that is what input elements hold; the
 * conversion back to a config document must reproduce a loaded document
 * exactly, so numbers travel through the shortest decimal representation
 * in both directions.
 */

import type { MitigationDoc, RangesDoc, RunConfigDoc } from './types.js';

export const MITIGATION_NAMES = [
  'lifespan_extension',
  'space_optimization',
  'wood_substitution',
  'recycling_enhancement',
  'prefabrication',
  'operational_efficiency',
] as const;

export type MitigationName = (typeof MITIGATION_NAMES)[number];

export const COST_NAMES = [
  'commercial_renovation',
  'commercial_new_construction',
  'commercial_demolition',
  'residential_apartment_new_construction',
  'residential_single_family_new_construction',
  'residential_apartment_renovation',
  'residential_single_family_renovation',
  'residential_demolition',
] as const;

const MITIGATION_DEFAULT_FACTORS: Record<MitigationName, number> = {
  lifespan_extension: 10.0,
  space_optimization: 0.9,
  wood_substitution: 0.5,
  recycling_enhancement: 0.8,
  prefabrication: 0.9,
  operational_efficiency: 0.8,
};

const COST_DEFAULTS: Record<string, number> = {
  commercial_renovation: 450.0,
  commercial_new_construction: 562.0,
  commercial_demolition: 10.0,
  residential_apartment_new_construction: 508.0,
  residential_single_family_new_construction: 200.0,
  residential_apartment_renovation: 400.0,
  residential_single_family_renovation: 100.0,
  residential_demolition: 15.0,
};

/** Evenly spaced grid, each member rounded to cents. */
export function gridRange(start: number, stop: number, step: number): number[] {
  const values: number[] = [];
  const count = Math.round((stop - start) / step);
  for (let i = 0; i <= count; i++) {
    values.push(Math.round((start + i * step) * 100) / 100);
  }
  return values;
}

export function defaultRanges(): RangesDoc {
  return {
    lifespan_threshold: [50.0, 60.0, 70.0, 80.0],
    new_age_threshold: 20.0,
    demolition_proportion: [0.2, 0.3, 0.4, 0.5],
    renovation_emission_rate: gridRange(1.0, 1.5, 0.05),
    replacement_emission_rate: gridRange(1.0, 3.0, 0.1),
    renovation_vs_replacement: gridRange(0.1, 0.95, 0.05),
    new_buildings_proportion: [0.01, 0.05],
    new_buildings_area_factor: [0.8, 1.2],
  };
}

export function defaultMitigation(): MitigationDoc {
  const doc = {} as Record<MitigationName, { enabled: boolean; factor: number }>;
  for (const name of MITIGATION_NAMES) {
    doc[name] = { enabled: false, factor: MITIGATION_DEFAULT_FACTORS[name] };
  }
  return doc as unknown as MitigationDoc;
}

export function defaultConfig(): RunConfigDoc {
  return {
    seed: null,
    iterations: null,
    horizon_years: 10.0,
    sample_size: null,
    reference_year: null,
    emission_stages: ['A', 'B', 'C'],
    fallback_policy: 'nearest_by_structure',
    renovation_basis_fraction: 1.0,
    dac_price_per_tonne: 500.0,
    ranges: defaultRanges(),
    mitigation: defaultMitigation(),
    costs: { ...COST_DEFAULTS },
  };
}

export interface MitigationFormRow {
  enabled: boolean;
  factor: string;
}

export interface FormState {
  seed: string;
  iterations: string;
  horizonYears: string;
  sampleSize: string;
  referenceYear: string;
  stageA: boolean;
  stageB: boolean;
  stageC: boolean;
  fallbackPolicy: string;
  renovationBasisFraction: string;
  dacPricePerTonne: string;
  lifespanThreshold: string;
  newAgeThreshold: string;
  demolitionProportion: string;
  renovationEmissionRate: string;
  replacementEmissionRate: string;
  renovationVsReplacement: string;
  newBuildingsLow: string;
  newBuildingsHigh: string;
  areaFactorLow: string;
  areaFactorHigh: string;
  mitigation: Record<MitigationName, MitigationFormRow>;
  costs: Record<string, string>;
}

function num(value: number): string {
  return String(value);
}

function numList(values: number[]): string {
  return values.map(num).join(', ');
}

function optional(value: number | null): string {
  return value === null ? '' : String(value);
}

export function formFromConfig(config: RunConfigDoc): FormState {
  const mitigation = {} as Record<MitigationName, MitigationFormRow>;
  for (const name of MITIGATION_NAMES) {
    const lever = config.mitigation[name];
    mitigation[name] = { enabled: lever.enabled, factor: num(lever.factor) };
  }
  const costs: Record<string, string> = {};
  for (const [name, value] of Object.entries(config.costs)) {
    costs[name] = num(value);
  }
  return {
    seed: optional(config.seed),
    iterations: optional(config.iterations),
    horizonYears: num(config.horizon_years),
    sampleSize: optional(config.sample_size),
    referenceYear: optional(config.reference_year),
    stageA: config.emission_stages.includes('A'),
    stageB: config.emission_stages.includes('B'),
    stageC: config.emission_stages.includes('C'),
    fallbackPolicy: config.fallback_policy,
    renovationBasisFraction: num(config.renovation_basis_fraction),
    dacPricePerTonne: num(config.dac_price_per_tonne),
    lifespanThreshold: numList(config.ranges.lifespan_threshold),
    newAgeThreshold: num(config.ranges.new_age_threshold),
    demolitionProportion: numList(config.ranges.demolition_proportion),
    renovationEmissionRate: numList(config.ranges.renovation_emission_rate),
    replacementEmissionRate: numList(config.ranges.replacement_emission_rate),
    renovationVsReplacement: numList(config.ranges.renovation_vs_replacement),
    newBuildingsLow: num(config.ranges.new_buildings_proportion[0]),
    newBuildingsHigh: num(config.ranges.new_buildings_proportion[1]),
    areaFactorLow: num(config.ranges.new_buildings_area_factor[0]),
    areaFactorHigh: num(config.ranges.new_buildings_area_factor[1]),
    mitigation,
    costs,
  };
}

export function defaultForm(): FormState {
  return formFromConfig(defaultConfig());
}

export interface ParsedForm {
  config: RunConfigDoc;
  errors: Record<string, string>;
}

/**
 * Parse the form back into a config document. Unparseable entries land in
 * `errors` keyed by the form field; semantic limits are the server's call
 * and come back through its field_errors.
 */
export function readForm(state: FormState): ParsedForm {
  const errors: Record<string, string> = {};

  function floatOf(field: string, raw: string): number {
    const value = Number(raw.trim());
    if (raw.trim() === '' || !Number.isFinite(value)) {
      errors[field] = 'must be a number';
      return NaN;
    }
    return value;
  }

  function intOf(field: string, raw: string): number {
    const value = floatOf(field, raw);
    if (!Number.isNaN(value) && !Number.isInteger(value)) {
      errors[field] = 'must be a whole number';
    }
    return value;
  }

  function optionalInt(field: string, raw: string): number | null {
    return raw.trim() === '' ? null : intOf(field, raw);
  }

  function listOf(field: string, raw: string): number[] {
    const parts = raw.split(',').map((p) => p.trim()).filter((p) => p !== '');
    if (parts.length === 0) {
      errors[field] = 'needs at least one value';
      return [];
    }
    const values = parts.map(Number);
    if (values.some((v) => !Number.isFinite(v))) {
      errors[field] = 'must be comma-separated numbers';
      return [];
    }
    return values;
  }

  const stages: string[] = [];
  if (state.stageA) stages.push('A');
  if (state.stageB) stages.push('B');
  if (state.stageC) stages.push('C');

  const mitigation = {} as Record<MitigationName, { enabled: boolean; factor: number }>;
  for (const name of MITIGATION_NAMES) {
    const row = state.mitigation[name];
    mitigation[name] = { enabled: row.enabled, factor: floatOf(`mitigation.${name}`, row.factor) };
  }

  const costs: Record<string, number> = {};
  for (const [name, raw] of Object.entries(state.costs)) {
    costs[name] = floatOf(`costs.${name}`, raw);
  }

  const config: RunConfigDoc = {
    seed: optionalInt('seed', state.seed),
    iterations: optionalInt('iterations', state.iterations),
    horizon_years: floatOf('horizon_years', state.horizonYears),
    sample_size: optionalInt('sample_size', state.sampleSize),
    reference_year: optionalInt('reference_year', state.referenceYear),
    emission_stages: stages,
    fallback_policy: state.fallbackPolicy,
    renovation_basis_fraction: floatOf('renovation_basis_fraction', state.renovationBasisFraction),
    dac_price_per_tonne: floatOf('dac_price_per_tonne', state.dacPricePerTonne),
    ranges: {
      lifespan_threshold: listOf('ranges.lifespan_threshold', state.lifespanThreshold),
      new_age_threshold: floatOf('ranges.new_age_threshold', state.newAgeThreshold),
      demolition_proportion: listOf('ranges.demolition_proportion', state.demolitionProportion),
      renovation_emission_rate: listOf('ranges.renovation_emission_rate', state.renovationEmissionRate),
      replacement_emission_rate: listOf('ranges.replacement_emission_rate', state.replacementEmissionRate),
      renovation_vs_replacement: listOf('ranges.renovation_vs_replacement', state.renovationVsReplacement),
      new_buildings_proportion: [
        floatOf('ranges.new_buildings_proportion', state.newBuildingsLow),
        floatOf('ranges.new_buildings_proportion', state.newBuildingsHigh),
      ],
      new_buildings_area_factor: [
        floatOf('ranges.new_buildings_area_factor', state.areaFactorLow),
        floatOf('ranges.new_buildings_area_factor', state.areaFactorHigh),
      ],
    },
    mitigation: mitigation as unknown as MitigationDoc,
    costs,
  };
  return { config, errors };
}

export interface ClampResult {
  value: number;
  clamped: boolean;
}

/** Snap a typed value to the nearest grid member; ties resolve downward. */
export function clampToGrid(value: number, grid: number[]): ClampResult {
  if (grid.length === 0) return { value, clamped: false };
  let best = grid[0];
  for (const member of grid) {
    if (Math.abs(member - value) < Math.abs(best - value)) best = member;
  }
  return { value: best, clamped: best !== value };
}

/** The note shown beside a snapped input, or null when nothing changed. */
export function describeClamp(requested: number, result: ClampResult, grid: number[]): string | null {
  if (!result.clamped) return null;
  return `adjusted ${requested} to ${result.value} (allowed: ${grid.join(', ')})`;
}
