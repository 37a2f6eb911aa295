/**
 * Direct air capture cost arithmetic. Emissions are tracked in kgCO2e and
 * capture is priced per tonne, so the displayed cost is a pure rescaling of
 * emissions; the slider never needs a new simulation run.
 */

export const DEFAULT_DAC_PRICE_PER_TONNE = 500.0;

export function dacCostUsd(emissionsKg: number, pricePerTonne: number): number {
  return (emissionsKg / 1000.0) * pricePerTonne;
}

/** Re-price a cost computed at one capture price to another. */
export function rescaleDacCost(cost: number, fromPrice: number, toPrice: number): number {
  if (fromPrice === 0) throw new Error('cannot rescale from a zero price');
  return (cost / fromPrice) * toPrice;
}
