/**
 * Tab definitions and view rendering. Every renderer is a pure function
 * from served documents to an HTML string; the app shell owns the DOM and
 * event wiring. Numbers shown here come from the summary, the outcome
 * table, or the model document, except capture costs, which are the
 * documented client-side rescaling of emissions by the slider price.
 */

import { barChart, fmtNum, histogramChart, lineChart, scatter3dChart, scatterChart } from './charts.js';
import { column, type OutcomeTable } from './csv.js';
import { dacCostUsd } from './dac.js';
import { isFittedModel, type ModelDoc, type ScenarioDoc, type SummaryDoc } from './types.js';
import { predictWithBand, requiredFeatures } from './model.js';
import { histogram } from './stats.js';

export const TAB_IDS = [
  'RegionalReview',
  'CostAnalysis',
  'VariablesLeadingToEmissions',
  'NewBuildingsEmissions',
  'ReplacementRenovationEmissions',
  'TotalEmissions',
  'TurnoverResults',
  'VariousEmissions',
  'Emissions3D',
  'Prediction',
] as const;

export type TabId = (typeof TAB_IDS)[number];

export const COST_SUBTAB_IDS = ['DAC', 'ConstructionChangeCost', 'EmissionVsConstructionCost'] as const;

export type CostSubTabId = (typeof COST_SUBTAB_IDS)[number];

export const TAB_LABELS: Record<TabId, string> = {
  RegionalReview: 'Regional Review',
  CostAnalysis: 'Cost Analysis',
  VariablesLeadingToEmissions: 'Variables Leading to Emissions',
  NewBuildingsEmissions: 'New Buildings Emissions',
  ReplacementRenovationEmissions: 'Replacement & Renovation Emissions',
  TotalEmissions: 'Total Emissions',
  TurnoverResults: 'Turnover Results',
  VariousEmissions: 'Various Emissions',
  Emissions3D: '3D Emissions',
  Prediction: 'Prediction',
};

export const COST_SUBTAB_LABELS: Record<CostSubTabId, string> = {
  DAC: 'Direct Air Capture',
  ConstructionChangeCost: 'Construction Change Cost',
  EmissionVsConstructionCost: 'Emission vs Construction Cost',
};

export interface ViewState {
  city: string;
  activeTab: TabId;
  costSubTab: CostSubTabId;
  runId: string | null;
  dacPriceOverride: number | null;
}

export interface RunData {
  summary: SummaryDoc | null;
  table: OutcomeTable | null;
  model: ModelDoc | null;
}

const SCENARIO_ORDER: Array<['optimistic' | 'probable' | 'pessimistic', string]> = [
  ['optimistic', 'Optimistic'],
  ['probable', 'Most Probable'],
  ['pessimistic', 'Pessimistic'],
];

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

export function fmtUsd(value: number): string {
  const sign = value < 0 ? '-' : '';
  return `${sign}$${fmtNum(Math.abs(value))}`;
}

export function fmtKg(value: number): string {
  return `${fmtNum(value)} kgCO2e`;
}

function guard(message: string): string {
  return `<p class="guard">${esc(message)}</p>`;
}

const NEEDS_RUN = 'Run a simulation to populate this view.';

export function renderTabBar(active: TabId): string {
  const buttons = TAB_IDS.map((id) => {
    const current = id === active ? ' aria-current="page"' : '';
    return `<button class="tab" data-tab="${id}"${current}>${esc(TAB_LABELS[id])}</button>`;
  });
  return `<nav class="tab-bar">${buttons.join('')}</nav>`;
}

export function renderCostSubTabBar(active: CostSubTabId): string {
  const buttons = COST_SUBTAB_IDS.map((id) => {
    const current = id === active ? ' aria-current="page"' : '';
    return `<button class="subtab" data-subtab="${id}"${current}>${esc(COST_SUBTAB_LABELS[id])}</button>`;
  });
  return `<nav class="subtab-bar">${buttons.join('')}</nav>`;
}

function scenarioRows(summary: SummaryDoc, dacPrice: number): string {
  return SCENARIO_ORDER.map(([key, label]) => {
    const scenario: ScenarioDoc = summary.scenarios[key];
    const dac = dacCostUsd(scenario.total_emissions, dacPrice);
    return (
      `<tr><th>${label}</th>` +
      `<td>${esc(fmtKg(scenario.total_emissions))}</td>` +
      `<td>${esc(fmtNum(scenario.turnover_ratio))}</td>` +
      `<td>${esc(fmtUsd(scenario.total_cost))}</td>` +
      `<td class="dac-cost" data-scenario="${key}">${esc(fmtUsd(dac))}</td></tr>`
    );
  }).join('');
}

/** Probable, optimistic and pessimistic outcomes with client-priced capture costs. */
export function renderRegionalReview(data: RunData, dacPrice: number): string {
  const summary = data.summary;
  if (!summary) return guard(NEEDS_RUN);
  let markers: { label: string; value: number }[] = [];
  let chart = '';
  if (data.table) {
    const totals = column(data.table, 'total_emissions');
    markers = SCENARIO_ORDER.map(([key, label]) => ({
      label,
      value: summary.scenarios[key].total_emissions,
    }));
    chart = histogramChart(
      histogram(totals),
      { title: 'Total emissions across iterations', xLabel: 'kgCO2e', yLabel: 'iterations' },
      markers,
    );
  }
  return (
    `<section class="panel" data-panel="RegionalReview">` +
    `<h2>Regional Review</h2>` +
    `<p>${summary.iterations} iterations; capture priced at <span id="regional-dac-price">${esc(fmtUsd(dacPrice))}</span>/tonne.</p>` +
    `<table class="scenario-table"><thead><tr>` +
    `<th>Scenario</th><th>Total emissions</th><th>Turnover</th><th>Construction cost</th><th>Capture cost</th>` +
    `</tr></thead><tbody>${scenarioRows(summary, dacPrice)}</tbody></table>` +
    chart +
    `</section>`
  );
}

export function renderDacPanel(data: RunData, dacPrice: number): string {
  const summary = data.summary;
  if (!summary) return guard(NEEDS_RUN);
  const rows = SCENARIO_ORDER.map(([key, label]) => {
    const cost = dacCostUsd(summary.scenarios[key].total_emissions, dacPrice);
    return `<tr><th>${label}</th><td class="dac-cost" data-scenario="${key}">${esc(fmtUsd(cost))}</td></tr>`;
  }).join('');
  return (
    `<section class="panel" data-panel="DAC">` +
    `<h3>Direct air capture</h3>` +
    `<p>Price per tonne: <output id="dac-price-value">${esc(fmtUsd(dacPrice))}</output></p>` +
    `<input type="range" id="dac-price" min="0" max="2000" step="10" value="${dacPrice}"/>` +
    `<table class="scenario-table"><tbody>${rows}</tbody></table>` +
    `<p class="note">Costs rescale with the slider; no new run is needed.</p>` +
    `<button id="save-dac">Save as default price</button>` +
    `<span id="save-dac-status" class="status"></span>` +
    `</section>`
  );
}

export function renderConstructionChangeCost(costs: Record<string, number>): string {
  const rows = Object.entries(costs)
    .map(([name, value]) => {
      return (
        `<tr><th>${esc(name.replace(/_/g, ' '))}</th>` +
        `<td><input class="cost-input" data-cost-name="${esc(name)}" type="number" step="1" value="${value}"/> $/ft²</td></tr>`
      );
    })
    .join('');
  return (
    `<section class="panel" data-panel="ConstructionChangeCost">` +
    `<h3>Construction change cost</h3>` +
    `<p>Unit costs applied to future runs. Saving updates the service defaults.</p>` +
    `<table class="cost-table"><tbody>${rows}</tbody></table>` +
    `<button id="save-costs">Save unit costs</button>` +
    `<span id="save-costs-status" class="status"></span>` +
    `</section>`
  );
}

export function renderEmissionVsConstructionCost(data: RunData): string {
  if (!data.table) return guard(NEEDS_RUN);
  const emissions = column(data.table, 'total_emissions');
  const costs = column(data.table, 'total_cost');
  const points = emissions.map((x, i) => ({ x, y: costs[i] }));
  return (
    `<section class="panel" data-panel="EmissionVsConstructionCost">` +
    scatterChart(points, {
      title: 'Construction cost against total emissions',
      xLabel: 'total emissions (kgCO2e)',
      yLabel: 'construction cost ($)',
    }) +
    `</section>`
  );
}

export function renderCostAnalysis(data: RunData, subTab: CostSubTabId, dacPrice: number, costs: Record<string, number>): string {
  let panel: string;
  if (subTab === 'DAC') panel = renderDacPanel(data, dacPrice);
  else if (subTab === 'ConstructionChangeCost') panel = renderConstructionChangeCost(costs);
  else panel = renderEmissionVsConstructionCost(data);
  return renderCostSubTabBar(subTab) + panel;
}

/** Decile profiles of mean total emissions for each sampled variable. */
export function renderVariablesLeadingToEmissions(data: RunData): string {
  const summary = data.summary;
  if (!summary) return guard(NEEDS_RUN);
  const series = Object.entries(summary.driving_variables).map(([field, deciles]) => ({
    label: field,
    points: deciles.map((value, i) => (value === null ? null : { x: i + 1, y: value })),
  }));
  return (
    `<section class="panel" data-panel="VariablesLeadingToEmissions">` +
    lineChart(series, {
      title: 'Mean total emissions by variable decile',
      xLabel: 'variable decile',
      yLabel: 'mean total emissions (kgCO2e)',
    }) +
    `</section>`
  );
}

function emissionHistogram(data: RunData, columnName: string, title: string): string {
  if (!data.table) return guard(NEEDS_RUN);
  const values = column(data.table, columnName);
  return histogramChart(histogram(values), { title, xLabel: 'kgCO2e', yLabel: 'iterations' });
}

export function renderNewBuildingsEmissions(data: RunData): string {
  return (
    `<section class="panel" data-panel="NewBuildingsEmissions">` +
    emissionHistogram(data, 'emissions_new_construction', 'New construction embodied emissions') +
    `</section>`
  );
}

export function renderReplacementRenovationEmissions(data: RunData): string {
  return (
    `<section class="panel" data-panel="ReplacementRenovationEmissions">` +
    emissionHistogram(data, 'emissions_replace', 'Replacement embodied emissions') +
    emissionHistogram(data, 'emissions_renovate', 'Renovation embodied emissions') +
    `</section>`
  );
}

export function renderTotalEmissions(data: RunData): string {
  const summary = data.summary;
  if (!summary || !data.table) return guard(NEEDS_RUN);
  const totals = column(data.table, 'total_emissions');
  const markers = [
    { label: 'p5', value: summary.total_emissions.p5 },
    { label: 'median', value: summary.total_emissions.p50 },
    { label: 'p95', value: summary.total_emissions.p95 },
  ];
  const buckets = summary.by_lifespan.map((bucket) => ({
    label: `${fmtNum(bucket.lifespan_threshold)}y`,
    value: bucket.mean_total_emissions,
    low: bucket.p5,
    high: bucket.p95,
  }));
  return (
    `<section class="panel" data-panel="TotalEmissions">` +
    histogramChart(histogram(totals), { title: 'Total emissions', xLabel: 'kgCO2e', yLabel: 'iterations' }, markers) +
    barChart(buckets, { title: 'Mean total emissions by lifespan threshold', xLabel: '', yLabel: 'kgCO2e' }) +
    `</section>`
  );
}

export function renderTurnoverResults(data: RunData): string {
  const summary = data.summary;
  if (!summary || !data.table) return guard(NEEDS_RUN);
  const ratios = column(data.table, 'turnover_ratio');
  const stats = summary.turnover_ratio;
  return (
    `<section class="panel" data-panel="TurnoverResults">` +
    `<p>Turnover ratio: mean ${esc(fmtNum(stats.mean))}, spanning ${esc(fmtNum(stats.min))} to ${esc(fmtNum(stats.max))}.</p>` +
    histogramChart(
      histogram(ratios),
      { title: 'Turnover ratio across iterations', xLabel: 'future emissions ÷ current embodied', yLabel: 'iterations' },
      [
        { label: 'p5', value: stats.p5 },
        { label: 'median', value: stats.p50 },
        { label: 'p95', value: stats.p95 },
      ],
    ) +
    `</section>`
  );
}

export function renderVariousEmissions(data: RunData): string {
  if (!data.table) return guard(NEEDS_RUN);
  const parts: Array<[string, string]> = [
    ['emissions_renovate', 'Renovation'],
    ['emissions_replace', 'Replacement'],
    ['emissions_demolish', 'Demolition'],
    ['emissions_new_construction', 'New construction'],
    ['operational_emissions', 'Operational'],
  ];
  const items = parts.map(([name, label]) => {
    const values = column(data.table as OutcomeTable, name);
    return { label, value: values.reduce((a, b) => a + b, 0) / values.length };
  });
  return (
    `<section class="panel" data-panel="VariousEmissions">` +
    barChart(items, { title: 'Mean emissions by source', xLabel: '', yLabel: 'kgCO2e' }) +
    `</section>`
  );
}

export function renderEmissions3D(data: RunData): string {
  if (!data.table) return guard(NEEDS_RUN);
  const x = column(data.table, 'demolition_proportion');
  const y = column(data.table, 'lifespan_threshold');
  const z = column(data.table, 'total_emissions');
  const points = x.map((xi, i) => ({ x: xi, y: y[i], z: z[i] }));
  return (
    `<section class="panel" data-panel="Emissions3D">` +
    scatter3dChart(points, {
      title: 'Total emissions over demolition proportion and lifespan',
      xLabel: 'demolition proportion',
      yLabel: 'lifespan (years)',
      zLabel: 'total emissions',
    }) +
    `</section>`
  );
}

/** Feature inputs plus the locally evaluated prediction and its band. */
export function renderPrediction(model: ModelDoc | null, inputs: Record<string, number>): string {
  if (!model) return guard(NEEDS_RUN);
  if (!isFittedModel(model)) {
    return guard(`No model was fitted for this run: ${model.error}`);
  }
  const features = requiredFeatures(model);
  const rows = features
    .map((name) => {
      const value = inputs[name];
      const attr = value === undefined ? '' : ` value="${value}"`;
      return (
        `<tr><th>${esc(name.replace(/_/g, ' '))}</th>` +
        `<td><input class="pred-input" data-feature="${esc(name)}" type="number" step="any"${attr}/></td></tr>`
      );
    })
    .join('');
  return (
    `<section class="panel" data-panel="Prediction">` +
    `<h2>Prediction</h2>` +
    `<p>Fitted on ${model.n_observations} iterations; R² ${esc(model.r_squared.toFixed(4))}. Evaluated locally.</p>` +
    `<table class="pred-table"><tbody>${rows}</tbody></table>` +
    `<div id="pred-result">${renderPredictionResult(model, inputs)}</div>` +
    `</section>`
  );
}

/** Just the output line, so typing can refresh it without rebuilding the inputs. */
export function renderPredictionResult(model: ModelDoc, inputs: Record<string, number>): string {
  if (!isFittedModel(model)) return '';
  const features = requiredFeatures(model);
  const complete = features.every((name) => Number.isFinite(inputs[name]));
  if (!complete) return `<p class="note">Enter every variable to evaluate the model.</p>`;
  const band = predictWithBand(model, inputs);
  return (
    `<p class="prediction" id="pred-output">Predicted ${esc(model.target.replace(/_/g, ' '))}: ` +
    `<strong>${esc(fmtNum(band.value))}</strong>` +
    ` <span class="band">± ${esc(fmtNum(band.residualStd))} (one sigma: ${esc(fmtNum(band.low))} to ${esc(fmtNum(band.high))})</span></p>`
  );
}

export function renderActiveTab(
  state: ViewState,
  data: RunData,
  dacPrice: number,
  costs: Record<string, number>,
  predictionInputs: Record<string, number>,
): string {
  switch (state.activeTab) {
    case 'RegionalReview':
      return renderRegionalReview(data, dacPrice);
    case 'CostAnalysis':
      return renderCostAnalysis(data, state.costSubTab, dacPrice, costs);
    case 'VariablesLeadingToEmissions':
      return renderVariablesLeadingToEmissions(data);
    case 'NewBuildingsEmissions':
      return renderNewBuildingsEmissions(data);
    case 'ReplacementRenovationEmissions':
      return renderReplacementRenovationEmissions(data);
    case 'TotalEmissions':
      return renderTotalEmissions(data);
    case 'TurnoverResults':
      return renderTurnoverResults(data);
    case 'VariousEmissions':
      return renderVariousEmissions(data);
    case 'Emissions3D':
      return renderEmissions3D(data);
    case 'Prediction':
      return renderPrediction(data.model, predictionInputs);
  }
}
