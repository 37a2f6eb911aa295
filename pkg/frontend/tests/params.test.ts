import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import {
  clampToGrid,
  defaultConfig,
  defaultForm,
  defaultRanges,
  describeClamp,
  formFromConfig,
  gridRange,
  readForm,
} from '../src/params.js';
import type { RunConfigDoc } from '../src/types.js';

const savedConfig: RunConfigDoc = JSON.parse(
  readFileSync(new URL('./fixtures/run1/config.json', import.meta.url), 'utf8'),
);

describe('form round trip', () => {
  it('reproduces a saved run config exactly', () => {
    const form = formFromConfig(savedConfig);
    const { config, errors } = readForm(form);
    expect(errors).toEqual({});
    expect(config).toEqual(savedConfig);
  });

  it('reproduces the default config', () => {
    const { config, errors } = readForm(defaultForm());
    expect(errors).toEqual({});
    expect(config).toEqual(defaultConfig());
  });

  it('keeps a customized form intact', () => {
    const custom: RunConfigDoc = {
      ...defaultConfig(),
      seed: 42,
      iterations: 250,
      sample_size: 100,
      emission_stages: ['A', 'C'],
      fallback_policy: 'strict',
      renovation_basis_fraction: 0.35,
      dac_price_per_tonne: 750,
    };
    const { config, errors } = readForm(formFromConfig(custom));
    expect(errors).toEqual({});
    expect(config).toEqual(custom);
  });
});

describe('default parameter menus', () => {
  it('lists the canonical sampling grids', () => {
    const ranges = defaultRanges();
    expect(ranges.lifespan_threshold).toEqual([50, 60, 70, 80]);
    expect(ranges.new_age_threshold).toBe(20);
    expect(ranges.demolition_proportion).toEqual([0.2, 0.3, 0.4, 0.5]);
    expect(ranges.renovation_emission_rate).toHaveLength(11);
    expect(ranges.renovation_emission_rate[0]).toBe(1);
    expect(ranges.renovation_emission_rate[10]).toBe(1.5);
    expect(ranges.replacement_emission_rate).toHaveLength(21);
    expect(ranges.replacement_emission_rate[20]).toBe(3);
    expect(ranges.renovation_vs_replacement).toHaveLength(18);
    expect(ranges.renovation_vs_replacement[0]).toBe(0.1);
    expect(ranges.renovation_vs_replacement[17]).toBe(0.95);
    expect(ranges.new_buildings_proportion).toEqual([0.01, 0.05]);
    expect(ranges.new_buildings_area_factor).toEqual([0.8, 1.2]);
  });

  it('rounds generated grid members to cents', () => {
    expect(gridRange(1.0, 1.5, 0.05)).toContain(1.15);
    expect(gridRange(0.1, 0.95, 0.05).every((v) => v === Math.round(v * 100) / 100)).toBe(true);
  });

  it('matches the saved run defaults field for field', () => {
    expect(savedConfig.ranges).toEqual(defaultRanges());
    expect(savedConfig.costs).toEqual(defaultConfig().costs);
  });
});

describe('grid clamping', () => {
  const grid = defaultRanges().lifespan_threshold;

  it('snaps an off-grid lifespan to a neighbouring decade', () => {
    const result = clampToGrid(55, grid);
    expect(result.clamped).toBe(true);
    expect([50, 60]).toContain(result.value);
  });

  it('produces a visible note for the adjustment', () => {
    const result = clampToGrid(55, grid);
    const note = describeClamp(55, result, grid);
    expect(note).toBeTruthy();
    expect(note).toContain('55');
    expect(note).toContain(String(result.value));
  });

  it('leaves grid members untouched, without a note', () => {
    const result = clampToGrid(70, grid);
    expect(result).toEqual({ value: 70, clamped: false });
    expect(describeClamp(70, result, grid)).toBeNull();
  });

  it('snaps extremes to the nearest end', () => {
    expect(clampToGrid(30, grid).value).toBe(50);
    expect(clampToGrid(120, grid).value).toBe(80);
  });
});

describe('form parsing errors', () => {
  it('collects unparseable entries by field', () => {
    const form = defaultForm();
    form.seed = 'abc';
    form.horizonYears = '';
    form.demolitionProportion = '0.2, soon';
    const { errors } = readForm(form);
    expect(errors.seed).toBe('must be a number');
    expect(errors.horizon_years).toBeTruthy();
    expect(errors['ranges.demolition_proportion']).toBeTruthy();
  });

  it('treats blank optional fields as unset', () => {
    const form = defaultForm();
    form.seed = '';
    form.sampleSize = '';
    const { config, errors } = readForm(form);
    expect(errors).toEqual({});
    expect(config.seed).toBeNull();
    expect(config.sample_size).toBeNull();
  });

  it('rejects fractional run counts', () => {
    const form = defaultForm();
    form.iterations = '10.5';
    const { errors } = readForm(form);
    expect(errors.iterations).toBe('must be a whole number');
  });
});
