/**
 * Small numeric helpers for the chart views. Percentiles use the
 * nearest-rank definition so the dashboard reports the same observed
 * values as the served summaries.
 */

export function mean(values: number[]): number {
  if (values.length === 0) return NaN;
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

/** Nearest-rank percentile: always a member of `values`. */
export function nearestRank(values: number[], percentile: number): number {
  if (values.length === 0) throw new Error('no values');
  if (percentile <= 0 || percentile > 100) throw new Error('percentile must lie in (0, 100]');
  const sorted = [...values].sort((a, b) => a - b);
  const rank = Math.ceil((percentile / 100) * sorted.length);
  return sorted[Math.max(0, rank - 1)];
}

export function extent(values: number[]): [number, number] {
  let low = Infinity;
  let high = -Infinity;
  for (const v of values) {
    if (v < low) low = v;
    if (v > high) high = v;
  }
  return [low, high];
}

export interface HistogramBin {
  x0: number;
  x1: number;
  count: number;
}

/**
 * Freedman-Diaconis binning, falling back to a fixed bin count when the
 * interquartile range collapses. Returns at least one bin.
 */
export function histogram(values: number[], maxBins = 60): HistogramBin[] {
  if (values.length === 0) return [];
  const [low, high] = extent(values);
  if (low === high) {
    return [{ x0: low, x1: high, count: values.length }];
  }
  const iqr = nearestRank(values, 75) - nearestRank(values, 25);
  let binCount: number;
  if (iqr > 0) {
    const width = (2 * iqr) / Math.cbrt(values.length);
    binCount = Math.ceil((high - low) / width);
  } else {
    binCount = Math.ceil(Math.log2(values.length)) + 1;
  }
  binCount = Math.min(Math.max(binCount, 1), maxBins);
  const step = (high - low) / binCount;
  const bins: HistogramBin[] = [];
  for (let i = 0; i < binCount; i++) {
    bins.push({ x0: low + i * step, x1: low + (i + 1) * step, count: 0 });
  }
  for (const v of values) {
    let index = Math.floor((v - low) / step);
    if (index >= binCount) index = binCount - 1; // the maximum lands in the last bin
    bins[index].count += 1;
  }
  return bins;
}
