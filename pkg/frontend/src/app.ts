/**
 * Application shell: owns the DOM, delegates everything else. All markup
 * comes from the pure renderers; this file only places it and routes
 * events back into state changes.
 */

import { ApiError, SimulationApi } from './api.js';
import {
  clampToGrid,
  defaultConfig,
  defaultForm,
  defaultRanges,
  describeClamp,
  formFromConfig,
  readForm,
  MITIGATION_NAMES,
  type FormState,
  type MitigationName,
} from './params.js';
import { parseOutcomesCsv } from './csv.js';
import { dacCostUsd } from './dac.js';
import { pollRun } from './polling.js';
import {
  fmtUsd,
  renderActiveTab,
  renderPredictionResult,
  renderTabBar,
  type CostSubTabId,
  type RunData,
  type TabId,
  type ViewState,
} from './tabs.js';

const api = new SimulationApi();

let form: FormState = defaultForm();
let lastLoadedConfigNote = '';
let clampNote = '';
let fieldErrors: Record<string, string> = {};

const state: ViewState = {
  city: '',
  activeTab: 'RegionalReview',
  costSubTab: 'DAC',
  runId: null,
  dacPriceOverride: null,
};

let data: RunData = { summary: null, table: null, model: null };
let serviceCosts: Record<string, number> = { ...defaultConfig().costs };
const predictionInputs: Record<string, number> = {};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

function dacPrice(): number {
  return state.dacPriceOverride ?? data.summary?.dac_price_per_tonne ?? defaultConfig().dac_price_per_tonne;
}

// ---------------------------------------------------------------- banner

function showBanner(message: string, retry?: () => void): void {
  const banner = el<HTMLDivElement>('banner');
  banner.innerHTML = `<span>${esc(message)}</span>` + (retry ? '<button id="banner-retry">Retry</button>' : '');
  banner.hidden = false;
  if (retry) el<HTMLButtonElement>('banner-retry').addEventListener('click', retry, { once: true });
}

function clearBanner(): void {
  const banner = el<HTMLDivElement>('banner');
  banner.hidden = true;
  banner.innerHTML = '';
}

// ------------------------------------------------------------------ form

interface TextFieldSpec {
  bind: keyof FormState & string;
  label: string;
  errKey: string;
  hint?: string;
}

const RUN_FIELDS: TextFieldSpec[] = [
  { bind: 'seed', label: 'Seed', errKey: 'seed' },
  { bind: 'iterations', label: 'Iterations', errKey: 'iterations' },
  { bind: 'horizonYears', label: 'Horizon (years)', errKey: 'horizon_years' },
  { bind: 'sampleSize', label: 'Sample size', errKey: 'sample_size', hint: 'blank = whole stock' },
  { bind: 'referenceYear', label: 'Reference year', errKey: 'reference_year', hint: 'blank = current year' },
];

const RANGE_FIELDS: TextFieldSpec[] = [
  { bind: 'lifespanThreshold', label: 'Lifespan thresholds (years)', errKey: 'ranges.lifespan_threshold' },
  { bind: 'newAgeThreshold', label: 'New-building age threshold', errKey: 'ranges.new_age_threshold' },
  { bind: 'demolitionProportion', label: 'Demolition proportions', errKey: 'ranges.demolition_proportion' },
  { bind: 'renovationEmissionRate', label: 'Renovation emission rates', errKey: 'ranges.renovation_emission_rate' },
  { bind: 'replacementEmissionRate', label: 'Replacement emission rates', errKey: 'ranges.replacement_emission_rate' },
  { bind: 'renovationVsReplacement', label: 'Renovation vs replacement odds', errKey: 'ranges.renovation_vs_replacement' },
];

function textField(spec: TextFieldSpec): string {
  const error = fieldErrors[spec.errKey];
  const hint = spec.hint ? `<small>${esc(spec.hint)}</small>` : '';
  const errorNote = error ? `<span class="field-error">${esc(error)}</span>` : '';
  return (
    `<label class="field">${esc(spec.label)}` +
    `<input type="text" data-bind="${spec.bind}" value="${esc(String(form[spec.bind]))}"/>` +
    `${hint}${errorNote}</label>`
  );
}

function renderFormHtml(): string {
  const topErrors = Object.entries(fieldErrors)
    .map(([key, message]) => `<li><code>${esc(key)}</code>: ${esc(message)}</li>`)
    .join('');
  const errorBlock = topErrors ? `<ul class="form-errors">${topErrors}</ul>` : '';
  const clampBlock = clampNote ? `<p class="clamp-note" id="clamp-note">${esc(clampNote)}</p>` : '';
  const loadedBlock = lastLoadedConfigNote ? `<p class="note">${esc(lastLoadedConfigNote)}</p>` : '';

  const pairs = (lowBind: string, highBind: string, label: string, errKey: string) => {
    const error = fieldErrors[errKey];
    const errorNote = error ? `<span class="field-error">${esc(error)}</span>` : '';
    return (
      `<label class="field">${esc(label)}<span class="pair">` +
      `<input type="text" data-bind="${lowBind}" value="${esc(String(form[lowBind as keyof FormState]))}"/>` +
      ` to <input type="text" data-bind="${highBind}" value="${esc(String(form[highBind as keyof FormState]))}"/>` +
      `</span>${errorNote}</label>`
    );
  };

  const mitigationRows = MITIGATION_NAMES.map((name) => {
    const row = form.mitigation[name];
    const checked = row.enabled ? ' checked' : '';
    const error = fieldErrors[`mitigation.${name}`];
    const errorNote = error ? `<span class="field-error">${esc(error)}</span>` : '';
    return (
      `<tr><th>${esc(name.replace(/_/g, ' '))}</th>` +
      `<td><input type="checkbox" data-mit="${name}" data-mit-part="enabled"${checked}/></td>` +
      `<td><input type="text" data-mit="${name}" data-mit-part="factor" value="${esc(row.factor)}"/>${errorNote}</td></tr>`
    );
  }).join('');

  return (
    errorBlock +
    loadedBlock +
    `<fieldset><legend>Run</legend>${RUN_FIELDS.map(textField).join('')}</fieldset>` +
    `<fieldset><legend>Emission stages</legend>` +
    `<label><input type="checkbox" data-bind-check="stageA"${form.stageA ? ' checked' : ''}/> Product & construction (A)</label>` +
    `<label><input type="checkbox" data-bind-check="stageB"${form.stageB ? ' checked' : ''}/> Embodied use (B)</label>` +
    `<label><input type="checkbox" data-bind-check="stageC"${form.stageC ? ' checked' : ''}/> End of life (C)</label>` +
    `<label class="field">Missing-archetype fallback` +
    `<select data-bind="fallbackPolicy">` +
    ['nearest_by_structure', 'strict', 'global_mean']
      .map((p) => `<option value="${p}"${form.fallbackPolicy === p ? ' selected' : ''}>${p.replace(/_/g, ' ')}</option>`)
      .join('') +
    `</select></label>` +
    `<label class="field">Renovation basis fraction` +
    `<input type="text" data-bind="renovationBasisFraction" value="${esc(form.renovationBasisFraction)}"/></label>` +
    `</fieldset>` +
    `<fieldset><legend>Scenario ranges</legend>` +
    RANGE_FIELDS.map(textField).join('') +
    clampBlock +
    pairs('newBuildingsLow', 'newBuildingsHigh', 'New buildings proportion', 'ranges.new_buildings_proportion') +
    pairs('areaFactorLow', 'areaFactorHigh', 'New buildings area factor', 'ranges.new_buildings_area_factor') +
    `</fieldset>` +
    `<fieldset><legend>Mitigation strategies</legend>` +
    `<table class="mitigation-table"><thead><tr><th>strategy</th><th>on</th><th>factor</th></tr></thead>` +
    `<tbody>${mitigationRows}</tbody></table></fieldset>` +
    `<fieldset><legend>Capture price</legend>` +
    textField({ bind: 'dacPricePerTonne', label: 'DAC price ($/tonne)', errKey: 'dac_price_per_tonne' }) +
    `</fieldset>`
  );
}

function renderForm(): void {
  el<HTMLFormElement>('param-form').innerHTML = renderFormHtml();
}

function handleFormInput(target: HTMLElement): void {
  if (target instanceof HTMLInputElement || target instanceof HTMLSelectElement) {
    const bind = target.dataset.bind;
    if (bind) {
      (form as unknown as Record<string, unknown>)[bind] = target.value;
      return;
    }
    if (target instanceof HTMLInputElement && target.dataset.bindCheck) {
      (form as unknown as Record<string, unknown>)[target.dataset.bindCheck] = target.checked;
      return;
    }
    const mit = target.dataset.mit as MitigationName | undefined;
    if (mit && target instanceof HTMLInputElement) {
      if (target.dataset.mitPart === 'enabled') form.mitigation[mit].enabled = target.checked;
      else form.mitigation[mit].factor = target.value;
    }
  }
}

/** Lifespans come from a fixed menu; typed values snap to it with a note. */
function clampLifespans(input: HTMLInputElement): void {
  const grid = defaultRanges().lifespan_threshold;
  const entries = input.value
    .split(',')
    .map((p) => Number(p.trim()))
    .filter((v) => Number.isFinite(v));
  if (entries.length === 0) return;
  const notes: string[] = [];
  const snapped: number[] = [];
  for (const value of entries) {
    const result = clampToGrid(value, grid);
    const note = describeClamp(value, result, grid);
    if (note) notes.push(note);
    if (!snapped.includes(result.value)) snapped.push(result.value);
  }
  snapped.sort((a, b) => a - b);
  form.lifespanThreshold = snapped.join(', ');
  clampNote = notes.join('; ');
  renderForm();
}

// -------------------------------------------------------------- progress

function setProgress(fraction: number, label: string): void {
  const clamped = Math.max(0, Math.min(1, fraction));
  el<HTMLDivElement>('progress-fill').style.width = `${(clamped * 100).toFixed(1)}%`;
  el<HTMLSpanElement>('progress-text').textContent = `${label} ${(clamped * 100).toFixed(0)}%`;
  el<HTMLDivElement>('progress').hidden = false;
}

// ------------------------------------------------------------------ runs

async function launchRun(): Promise<void> {
  const { config, errors } = readForm(form);
  fieldErrors = errors;
  clampNote = '';
  if (Object.keys(errors).length > 0) {
    renderForm();
    return;
  }
  if (!state.city) {
    showBanner('Pick a city first.');
    return;
  }
  clearBanner();
  const launch = el<HTMLButtonElement>('launch');
  launch.disabled = true;
  try {
    const submitted = await api.submitRun(state.city, config as unknown as Record<string, unknown>);
    state.runId = submitted.run_id;
    setProgress(0, 'queued');
    const final = await pollRun(api, submitted.run_id, {
      intervalMs: 400,
      onUpdate: (d) => setProgress(d.progress, d.state),
    });
    if (final.state === 'failed') {
      showBanner(`Run failed: ${final.reason ?? 'no reason recorded'}`);
      return;
    }
    setProgress(1, 'completed');
    const [summary, csvText, model] = await Promise.all([
      api.getSummary(submitted.run_id),
      api.getOutcomesCsv(submitted.run_id),
      api.getModel(submitted.run_id),
    ]);
    data = { summary, table: parseOutcomesCsv(csvText), model };
    state.dacPriceOverride = null;
    renderForm();
    renderContent();
  } catch (err) {
    handleError(err, launchRun);
  } finally {
    launch.disabled = false;
  }
}

function handleError(err: unknown, retry?: () => void): void {
  if (err instanceof ApiError) {
    fieldErrors = err.fieldErrors;
    renderForm();
    showBanner(err.message);
    return;
  }
  const message = err instanceof Error ? err.message : String(err);
  showBanner(`Service unreachable: ${message}`, retry);
}

async function loadRunConfig(): Promise<void> {
  if (!state.runId) {
    showBanner('No run to load from yet.');
    return;
  }
  try {
    const descriptor = await api.getRun(state.runId);
    form = formFromConfig(descriptor.config);
    fieldErrors = {};
    clampNote = '';
    lastLoadedConfigNote = `Loaded configuration of run ${descriptor.run_id}.`;
    renderForm();
  } catch (err) {
    handleError(err);
  }
}

// ---------------------------------------------------------------- cities

async function loadCities(): Promise<void> {
  try {
    const cities = await api.listCities();
    const select = el<HTMLSelectElement>('city-select');
    select.innerHTML = cities.map((c) => `<option value="${esc(c)}">${esc(c)}</option>`).join('');
    if (cities.length > 0) state.city = cities[0];
    clearBanner();
  } catch (err) {
    handleError(err, loadCities);
  }
}

// --------------------------------------------------------------- content

function renderContent(): void {
  el<HTMLDivElement>('tab-bar').innerHTML = renderTabBar(state.activeTab);
  el<HTMLDivElement>('tab-content').innerHTML = renderActiveTab(
    state,
    data,
    dacPrice(),
    serviceCosts,
    predictionInputs,
  );
}

/** Re-price the visible capture costs without rebuilding the panel. */
function updateDacCells(price: number): void {
  const summary = data.summary;
  if (!summary) return;
  document.querySelectorAll<HTMLElement>('.dac-cost').forEach((cell) => {
    const key = cell.dataset.scenario as 'optimistic' | 'probable' | 'pessimistic';
    cell.textContent = fmtUsd(dacCostUsd(summary.scenarios[key].total_emissions, price));
  });
  const value = document.getElementById('dac-price-value');
  if (value) value.textContent = fmtUsd(price);
  const regional = document.getElementById('regional-dac-price');
  if (regional) regional.textContent = fmtUsd(price);
}

async function saveCosts(): Promise<void> {
  const costs: Record<string, number> = {};
  document.querySelectorAll<HTMLInputElement>('.cost-input').forEach((input) => {
    const name = input.dataset.costName;
    const value = Number(input.value);
    if (name && Number.isFinite(value)) costs[name] = value;
  });
  const status = el<HTMLSpanElement>('save-costs-status');
  try {
    serviceCosts = await api.setDefaultCosts(costs);
    status.textContent = 'saved';
  } catch (err) {
    status.textContent = err instanceof ApiError ? err.message : 'save failed';
  }
}

async function saveDacDefault(): Promise<void> {
  const status = el<HTMLSpanElement>('save-dac-status');
  try {
    const echoed = await api.setDefaultDacPrice(dacPrice());
    status.textContent = `default is now ${fmtUsd(echoed)}/tonne`;
  } catch (err) {
    status.textContent = err instanceof ApiError ? err.message : 'save failed';
  }
}

function handleContentInput(target: HTMLElement): void {
  if (target instanceof HTMLInputElement && target.id === 'dac-price') {
    state.dacPriceOverride = Number(target.value);
    updateDacCells(state.dacPriceOverride);
    return;
  }
  if (target instanceof HTMLInputElement && target.classList.contains('pred-input')) {
    const feature = target.dataset.feature;
    if (!feature) return;
    const value = Number(target.value);
    if (target.value.trim() === '' || Number.isNaN(value)) delete predictionInputs[feature];
    else predictionInputs[feature] = value;
    const result = document.getElementById('pred-result');
    if (result && data.model) result.innerHTML = renderPredictionResult(data.model, predictionInputs);
  }
}

function handleContentClick(target: HTMLElement): void {
  const tabButton = target.closest<HTMLElement>('button.tab');
  if (tabButton?.dataset.tab) {
    state.activeTab = tabButton.dataset.tab as TabId;
    renderContent();
    return;
  }
  const subtabButton = target.closest<HTMLElement>('button.subtab');
  if (subtabButton?.dataset.subtab) {
    state.costSubTab = subtabButton.dataset.subtab as CostSubTabId;
    renderContent();
    return;
  }
  if (target.id === 'save-costs') void saveCosts();
  if (target.id === 'save-dac') void saveDacDefault();
}

// ------------------------------------------------------------------ boot

export function boot(): void {
  renderForm();
  renderContent();
  void loadCities();

  el<HTMLFormElement>('param-form').addEventListener('input', (event) => {
    handleFormInput(event.target as HTMLElement);
  });
  el<HTMLFormElement>('param-form').addEventListener('change', (event) => {
    const target = event.target as HTMLElement;
    if (target instanceof HTMLInputElement && target.dataset.bind === 'lifespanThreshold') {
      clampLifespans(target);
    }
  });
  el<HTMLSelectElement>('city-select').addEventListener('change', (event) => {
    state.city = (event.target as HTMLSelectElement).value;
  });
  el<HTMLButtonElement>('launch').addEventListener('click', () => void launchRun());
  el<HTMLButtonElement>('load-config').addEventListener('click', () => void loadRunConfig());

  const content = el<HTMLDivElement>('tab-content');
  content.addEventListener('input', (event) => handleContentInput(event.target as HTMLElement));
  content.addEventListener('click', (event) => handleContentClick(event.target as HTMLElement));
  el<HTMLDivElement>('tab-bar').addEventListener('click', (event) => handleContentClick(event.target as HTMLElement));
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot();
}
