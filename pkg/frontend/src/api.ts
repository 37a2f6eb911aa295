/**
 * Thin client for the simulation service. Every method hits one endpoint and
 * returns the parsed document; failures surface as ApiError so callers can
 * show field-level validation messages next to the inputs that caused them.
 */

import type { ModelDoc, RunDescriptor, SummaryDoc } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly fieldErrors: Record<string, string>;

  constructor(status: number, message: string, fieldErrors?: Record<string, string>) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
    this.fieldErrors = fieldErrors ?? {};
  }
}

async function raiseFor(response: Response): Promise<never> {
  let message = `request failed with status ${response.status}`;
  let fieldErrors: Record<string, string> | undefined;
  try {
    const body = await response.json();
    const detail = body?.detail;
    if (typeof detail === 'string') {
      message = detail;
    } else if (detail && typeof detail === 'object') {
      if (typeof detail.message === 'string') message = detail.message;
      if (detail.field_errors && typeof detail.field_errors === 'object') {
        fieldErrors = detail.field_errors as Record<string, string>;
      }
    }
  } catch {
    // Non-JSON error body; keep the status-based message.
  }
  throw new ApiError(response.status, message, fieldErrors);
}

export class SimulationApi {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = '', fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, '');
    // Bind so the implementation survives being detached from window.
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  private async sendJson<T>(method: string, path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  async listCities(): Promise<string[]> {
    const doc = await this.getJson<{ cities: string[] }>('/api/cities');
    return doc.cities;
  }

  async submitRun(city: string, config: Record<string, unknown>): Promise<{ run_id: string; status_url: string }> {
    return this.sendJson('POST', '/api/runs', { city, config });
  }

  async getRun(runId: string): Promise<RunDescriptor> {
    return this.getJson(`/api/runs/${runId}`);
  }

  async getSummary(runId: string): Promise<SummaryDoc> {
    return this.getJson(`/api/runs/${runId}/summary`);
  }

  async getModel(runId: string): Promise<ModelDoc> {
    return this.getJson(`/api/runs/${runId}/model`);
  }

  async getOutcomesCsv(runId: string): Promise<string> {
    const response = await this.fetchImpl(`${this.base}/api/runs/${runId}/outcomes.csv`);
    if (!response.ok) await raiseFor(response);
    return response.text();
  }

  async deleteRun(runId: string): Promise<void> {
    const response = await this.fetchImpl(`${this.base}/api/runs/${runId}`, { method: 'DELETE' });
    if (!response.ok) await raiseFor(response);
  }

  async setDefaultCosts(costs: Record<string, number>): Promise<Record<string, number>> {
    // The body is the bare name-to-rate mapping; the echo wraps the merge.
    const doc = await this.sendJson<{ costs: Record<string, number> }>('PUT', '/api/defaults/costs', costs);
    return doc.costs;
  }

  async setDefaultDacPrice(pricePerTonne: number): Promise<number> {
    const doc = await this.sendJson<{ price_per_tonne: number }>('PUT', '/api/defaults/dac', {
      price_per_tonne: pricePerTonne,
    });
    return doc.price_per_tonne;
  }
}
