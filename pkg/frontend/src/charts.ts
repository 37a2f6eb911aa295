/**
 * Chart rendering as plain SVG strings. Every function is pure: data in,
 * markup out. The app injects the strings into containers; tests can
 * inspect them without a document.
 */

import type { HistogramBin } from './stats.js';
import { extent } from './stats.js';

export const WIDTH = 720;
export const HEIGHT = 360;
const MARGIN = { top: 36, right: 24, bottom: 48, left: 72 };

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export interface Point {
  x: number;
  y: number;
}

export interface Point3 {
  x: number;
  y: number;
  z: number;
}

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

export function fmtNum(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  const magnitude = Math.abs(value);
  if (magnitude >= 1e9) return `${(value / 1e9).toFixed(2)}B`;
  if (magnitude >= 1e6) return `${(value / 1e6).toFixed(2)}M`;
  if (magnitude >= 1e4) return `${(value / 1e3).toFixed(1)}k`;
  if (magnitude >= 100 || Number.isInteger(value)) return value.toFixed(0);
  return value.toPrecision(3);
}

function scale(domain: [number, number], range: [number, number]): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function ticks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / count;
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  const step = candidates.find((c) => (hi - lo) / c <= count) ?? candidates[3];
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step / 1e6; v += step) {
    out.push(Math.abs(v) < step / 1e6 ? 0 : v);
  }
  return out;
}

function frame(title: string, xLabel: string, yLabel: string, body: string): string {
  return (
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="${esc(title)}" class="chart">` +
    `<text class="chart-title" x="${WIDTH / 2}" y="20" text-anchor="middle">${esc(title)}</text>` +
    `<text class="axis-label" x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 8}" text-anchor="middle">${esc(xLabel)}</text>` +
    `<text class="axis-label" x="14" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 14 ${MARGIN.top + PLOT_H / 2})">${esc(yLabel)}</text>` +
    body +
    '</svg>'
  );
}

function xAxis(sx: (v: number) => number, lo: number, hi: number): string {
  const y = MARGIN.top + PLOT_H;
  let out = `<line class="axis" x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + PLOT_W}" y2="${y}"/>`;
  for (const t of ticks(lo, hi)) {
    const x = sx(t);
    out += `<line class="tick" x1="${x}" y1="${y}" x2="${x}" y2="${y + 5}"/>`;
    out += `<text class="tick-label" x="${x}" y="${y + 18}" text-anchor="middle">${esc(fmtNum(t))}</text>`;
  }
  return out;
}

function yAxis(sy: (v: number) => number, lo: number, hi: number): string {
  let out = `<line class="axis" x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${MARGIN.top + PLOT_H}"/>`;
  for (const t of ticks(lo, hi)) {
    const y = sy(t);
    out += `<line class="grid" x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + PLOT_W}" y2="${y}"/>`;
    out += `<text class="tick-label" x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end">${esc(fmtNum(t))}</text>`;
  }
  return out;
}

export interface ChartLabels {
  title: string;
  xLabel: string;
  yLabel: string;
}

export function histogramChart(bins: HistogramBin[], labels: ChartLabels, markers: { label: string; value: number }[] = []): string {
  if (bins.length === 0) return frame(labels.title, labels.xLabel, labels.yLabel, emptyNote());
  const xLo = bins[0].x0;
  const xHi = bins[bins.length - 1].x1;
  const yHi = Math.max(...bins.map((b) => b.count));
  const sx = scale([xLo, xHi], [MARGIN.left, MARGIN.left + PLOT_W]);
  const sy = scale([0, yHi], [MARGIN.top + PLOT_H, MARGIN.top]);
  let body = yAxis(sy, 0, yHi) + xAxis(sx, xLo, xHi);
  for (const bin of bins) {
    const x = sx(bin.x0);
    const w = Math.max(sx(bin.x1) - sx(bin.x0) - 1, 1);
    const y = sy(bin.count);
    body += `<rect class="bar" x="${x}" y="${y}" width="${w}" height="${MARGIN.top + PLOT_H - y}"/>`;
  }
  for (const marker of markers) {
    const x = sx(marker.value);
    body += `<line class="marker" x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + PLOT_H}"/>`;
    body += `<text class="marker-label" x="${x + 4}" y="${MARGIN.top + 12}">${esc(marker.label)}</text>`;
  }
  return frame(labels.title, labels.xLabel, labels.yLabel, body);
}

export function scatterChart(points: Point[], labels: ChartLabels): string {
  if (points.length === 0) return frame(labels.title, labels.xLabel, labels.yLabel, emptyNote());
  const [xLo, xHi] = extent(points.map((p) => p.x));
  const [yLo, yHi] = extent(points.map((p) => p.y));
  const sx = scale([xLo, xHi], [MARGIN.left, MARGIN.left + PLOT_W]);
  const sy = scale([yLo, yHi], [MARGIN.top + PLOT_H, MARGIN.top]);
  let body = yAxis(sy, yLo, yHi) + xAxis(sx, xLo, xHi);
  for (const p of points) {
    body += `<circle class="dot" cx="${sx(p.x)}" cy="${sy(p.y)}" r="2.5"/>`;
  }
  return frame(labels.title, labels.xLabel, labels.yLabel, body);
}

export interface Series {
  label: string;
  points: Array<Point | null>;
}

/** One polyline per series; null points break the line. */
export function lineChart(series: Series[], labels: ChartLabels): string {
  const all = series.flatMap((s) => s.points.filter((p): p is Point => p !== null));
  if (all.length === 0) return frame(labels.title, labels.xLabel, labels.yLabel, emptyNote());
  const [xLo, xHi] = extent(all.map((p) => p.x));
  const [yLo, yHi] = extent(all.map((p) => p.y));
  const sx = scale([xLo, xHi], [MARGIN.left, MARGIN.left + PLOT_W]);
  const sy = scale([yLo, yHi], [MARGIN.top + PLOT_H, MARGIN.top]);
  let body = yAxis(sy, yLo, yHi) + xAxis(sx, xLo, xHi);
  series.forEach((s, index) => {
    let path = '';
    let pen = 'M';
    for (const p of s.points) {
      if (p === null) {
        pen = 'M';
        continue;
      }
      path += `${pen}${sx(p.x)},${sy(p.y)}`;
      pen = 'L';
    }
    if (path) body += `<path class="line series-${index % 8}" d="${path}" fill="none"/>`;
    for (const p of s.points) {
      if (p !== null) body += `<circle class="dot series-${index % 8}" cx="${sx(p.x)}" cy="${sy(p.y)}" r="3"/>`;
    }
  });
  body += legend(series.map((s) => s.label));
  return frame(labels.title, labels.xLabel, labels.yLabel, body);
}

export interface BarItem {
  label: string;
  value: number;
  low?: number;
  high?: number;
}

/** Category bars with optional low/high whiskers. */
export function barChart(items: BarItem[], labels: ChartLabels): string {
  if (items.length === 0) return frame(labels.title, labels.xLabel, labels.yLabel, emptyNote());
  const highs = items.map((item) => item.high ?? item.value);
  const lows = items.map((item) => Math.min(item.low ?? 0, 0));
  const yHi = Math.max(...highs, 0);
  const yLo = Math.min(...lows, 0);
  const sy = scale([yLo, yHi], [MARGIN.top + PLOT_H, MARGIN.top]);
  const slot = PLOT_W / items.length;
  const barW = Math.min(slot * 0.6, 80);
  let body = yAxis(sy, yLo, yHi);
  body += `<line class="axis" x1="${MARGIN.left}" y1="${sy(0)}" x2="${MARGIN.left + PLOT_W}" y2="${sy(0)}"/>`;
  items.forEach((item, i) => {
    const cx = MARGIN.left + slot * i + slot / 2;
    const x = cx - barW / 2;
    const top = sy(Math.max(item.value, 0));
    const height = Math.abs(sy(item.value) - sy(0));
    body += `<rect class="bar" x="${x}" y="${top}" width="${barW}" height="${height}"/>`;
    if (item.low !== undefined && item.high !== undefined) {
      body += `<line class="whisker" x1="${cx}" y1="${sy(item.low)}" x2="${cx}" y2="${sy(item.high)}"/>`;
      body += `<line class="whisker" x1="${cx - 6}" y1="${sy(item.low)}" x2="${cx + 6}" y2="${sy(item.low)}"/>`;
      body += `<line class="whisker" x1="${cx - 6}" y1="${sy(item.high)}" x2="${cx + 6}" y2="${sy(item.high)}"/>`;
    }
    body += `<text class="tick-label" x="${cx}" y="${MARGIN.top + PLOT_H + 18}" text-anchor="middle">${esc(item.label)}</text>`;
    body += `<text class="bar-value" x="${cx}" y="${top - 6}" text-anchor="middle">${esc(fmtNum(item.value))}</text>`;
  });
  return frame(labels.title, labels.xLabel, '', body);
}

/**
 * Isometric projection of a point cloud. Axes are normalized to the unit
 * cube before projection so the three variables share the frame whatever
 * their scales; depth drives point size.
 */
export function scatter3dChart(points: Point3[], labels: ChartLabels & { zLabel: string }): string {
  if (points.length === 0) return frame(labels.title, labels.xLabel, labels.yLabel, emptyNote());
  const [xLo, xHi] = extent(points.map((p) => p.x));
  const [yLo, yHi] = extent(points.map((p) => p.y));
  const [zLo, zHi] = extent(points.map((p) => p.z));
  const nx = scale([xLo, xHi], [0, 1]);
  const ny = scale([yLo, yHi], [0, 1]);
  const nz = scale([zLo, zHi], [0, 1]);
  const cos = Math.cos(Math.PI / 6);
  const sin = Math.sin(Math.PI / 6);
  const cx = WIDTH / 2;
  const cy = MARGIN.top + PLOT_H * 0.62;
  const unit = PLOT_H * 0.52;

  function project(u: number, v: number, w: number): [number, number] {
    return [cx + (u - v) * cos * unit, cy + (u + v) * sin * unit * 0.9 - w * unit];
  }

  let body = '';
  const origin = project(0, 0, 0);
  const ex = project(1, 0, 0);
  const ey = project(0, 1, 0);
  const ez = project(0, 0, 1);
  for (const [end, label] of [
    [ex, labels.xLabel],
    [ey, labels.yLabel],
    [ez, labels.zLabel],
  ] as Array<[[number, number], string]>) {
    body += `<line class="axis" x1="${origin[0]}" y1="${origin[1]}" x2="${end[0]}" y2="${end[1]}"/>`;
    body += `<text class="axis-label" x="${end[0]}" y="${end[1] - 6}" text-anchor="middle">${esc(label)}</text>`;
  }
  const ordered = [...points].sort((a, b) => ny(a.y) + nx(a.x) - (ny(b.y) + nx(b.x)));
  for (const p of ordered) {
    const depth = (nx(p.x) + ny(p.y)) / 2;
    const [px, py] = project(nx(p.x), ny(p.y), nz(p.z));
    const r = 1.8 + 2.2 * depth;
    body += `<circle class="dot3d" cx="${px}" cy="${py}" r="${r.toFixed(2)}" opacity="${(0.35 + 0.55 * depth).toFixed(2)}"/>`;
  }
  return frame(labels.title, '', '', body);
}

function legend(entries: string[]): string {
  let out = '';
  entries.forEach((label, index) => {
    const x = MARGIN.left + 12;
    const y = MARGIN.top + 14 + index * 16;
    out += `<rect class="swatch series-${index % 8}" x="${x}" y="${y - 8}" width="10" height="10"/>`;
    out += `<text class="legend" x="${x + 16}" y="${y + 1}">${esc(label)}</text>`;
  });
  return out;
}

function emptyNote(): string {
  return `<text class="empty" x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle">no data</text>`;
}
