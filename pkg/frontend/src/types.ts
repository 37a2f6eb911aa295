/**
 * Shapes of the documents served by the simulation API. These mirror the
 * server's JSON artifacts; the dashboard never reads files directly.
 */

export type RunStateName = 'queued' | 'running' | 'completed' | 'failed';

export interface MitigationStrategyDoc {
  enabled: boolean;
  factor: number;
}

export interface MitigationDoc {
  lifespan_extension: MitigationStrategyDoc;
  space_optimization: MitigationStrategyDoc;
  wood_substitution: MitigationStrategyDoc;
  recycling_enhancement: MitigationStrategyDoc;
  prefabrication: MitigationStrategyDoc;
  operational_efficiency: MitigationStrategyDoc;
}

export interface RangesDoc {
  lifespan_threshold: number[];
  new_age_threshold: number;
  demolition_proportion: number[];
  renovation_emission_rate: number[];
  replacement_emission_rate: number[];
  renovation_vs_replacement: number[];
  new_buildings_proportion: [number, number];
  new_buildings_area_factor: [number, number];
}

export interface RunConfigDoc {
  seed: number | null;
  iterations: number | null;
  horizon_years: number;
  sample_size: number | null;
  reference_year: number | null;
  emission_stages: string[];
  fallback_policy: string;
  renovation_basis_fraction: number;
  dac_price_per_tonne: number;
  ranges: RangesDoc;
  mitigation: MitigationDoc;
  costs: Record<string, number>;
}

export interface RunDescriptor {
  run_id: string;
  state: RunStateName;
  progress: number;
  reason: string | null;
  city: string;
  created_at: string;
  config: RunConfigDoc;
  result_files: string[] | null;
}

export interface StatsBlock {
  mean: number;
  std: number;
  min: number;
  max: number;
  p5: number;
  p50: number;
  p95: number;
}

/** One selected outcome: scenario features plus its aggregates. */
export interface ScenarioDoc {
  iteration: number;
  total_emissions: number;
  total_cost: number;
  turnover_ratio: number;
  dac_cost: number;
  [feature: string]: number;
}

export interface LifespanBucket {
  lifespan_threshold: number;
  count: number;
  mean_total_emissions: number;
  p5: number;
  p95: number;
}

export interface SummaryDoc {
  iterations: number;
  dac_price_per_tonne: number;
  total_emissions: StatsBlock;
  turnover_ratio: StatsBlock;
  total_cost: StatsBlock;
  scenarios: {
    optimistic: ScenarioDoc;
    probable: ScenarioDoc;
    pessimistic: ScenarioDoc;
  };
  by_lifespan: LifespanBucket[];
  driving_variables: Record<string, Array<number | null>>;
}

export interface FittedModelDoc {
  target: string;
  columns: string[];
  coefficients: number[];
  r_squared: number;
  residual_std: number;
  standard_errors: number[];
  n_observations: number;
}

export interface ModelErrorDoc {
  error: string;
}

export type ModelDoc = FittedModelDoc | ModelErrorDoc;

export function isFittedModel(doc: ModelDoc): doc is FittedModelDoc {
  return !('error' in doc);
}
