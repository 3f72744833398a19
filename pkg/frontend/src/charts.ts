import { money } from "./format.js";
import type { SweepPointBody } from "./types.js";

// Charts are computed as plain data plus an SVG string so they can be
// exercised head-on in tests; the page just drops the string into a container.

export interface CaseBarDatum {
  id: number;
  label: string;
  profit: number;
  description?: string;
}

export interface CaseBar {
  id: number;
  label: string;
  x: number;
  y: number;
  width: number;
  height: number;
  cls: "positive" | "negative";
  valueText: string;
  description: string;
}

export interface CaseChartModel {
  width: number;
  height: number;
  zeroY: number;
  bars: CaseBar[];
}

const PAD = { top: 18, right: 12, bottom: 26, left: 12 };

export function caseChartModel(data: CaseBarDatum[], width = 640, height = 260): CaseChartModel {
  const innerW = width - PAD.left - PAD.right;
  const innerH = height - PAD.top - PAD.bottom;
  const lo = Math.min(0, ...data.map((d) => d.profit));
  const hi = Math.max(0, ...data.map((d) => d.profit));
  const span = hi - lo || 1;
  const yOf = (v: number) => PAD.top + ((hi - v) / span) * innerH;
  const zeroY = yOf(0);
  const slot = innerW / Math.max(1, data.length);
  const barW = slot * 0.62;
  const bars = data.map((d, i) => {
    const top = Math.min(yOf(d.profit), zeroY);
    const bottom = Math.max(yOf(d.profit), zeroY);
    return {
      id: d.id,
      label: d.label,
      x: PAD.left + i * slot + (slot - barW) / 2,
      y: top,
      width: barW,
      height: Math.max(1, bottom - top),
      cls: d.profit < 0 ? ("negative" as const) : ("positive" as const),
      valueText: money(d.profit),
      description: d.description ?? "",
    };
  });
  return { width, height, zeroY, bars };
}

export function renderCaseChart(model: CaseChartModel): string {
  const bars = model.bars
    .map(
      (b) =>
        `<g class="case-bar ${b.cls}">` +
        `<title>${escapeXml(b.description || b.label)}: ${b.valueText}</title>` +
        `<rect x="${fmt(b.x)}" y="${fmt(b.y)}" width="${fmt(b.width)}" height="${fmt(b.height)}"></rect>` +
        `<text class="bar-label" x="${fmt(b.x + b.width / 2)}" y="${model.height - 8}" text-anchor="middle">${escapeXml(b.label)}</text>` +
        `</g>`,
    )
    .join("");
  return (
    `<svg viewBox="0 0 ${model.width} ${model.height}" role="img" aria-label="profit per case">` +
    `<line class="zero-line" x1="${PAD.left}" x2="${model.width - PAD.right}" y1="${fmt(model.zeroY)}" y2="${fmt(model.zeroY)}"></line>` +
    bars +
    `</svg>`
  );
}

export type BreakevenInfo =
  | { kind: "value"; value: number }
  | { kind: "unbounded" }
  | { kind: "infeasible" };

export interface SweepChartModel {
  width: number;
  height: number;
  linePath: string;
  zeroY: number;
  crossing: { px: number; label: string } | null;
  badge: string | null;
}

export const NO_BREAKEVEN_BADGE = "no breakeven in range";

export function sweepChartModel(
  points: Pick<SweepPointBody, "x" | "profit">[],
  breakeven: BreakevenInfo,
  width = 640,
  height = 260,
): SweepChartModel {
  if (points.length === 0) {
    return { width, height, linePath: "", zeroY: height / 2, crossing: null, badge: null };
  }
  const innerW = width - PAD.left - PAD.right;
  const innerH = height - PAD.top - PAD.bottom;
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.profit);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(0, ...ys);
  const yHi = Math.max(0, ...ys);
  const xSpan = xHi - xLo || 1;
  const ySpan = yHi - yLo || 1;
  const pxOf = (x: number) => PAD.left + ((x - xLo) / xSpan) * innerW;
  const pyOf = (y: number) => PAD.top + ((yHi - y) / ySpan) * innerH;
  const linePath = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(pxOf(p.x))} ${fmt(pyOf(p.profit))}`)
    .join(" ");

  let crossing: SweepChartModel["crossing"] = null;
  let badge: string | null = null;
  if (breakeven.kind === "value" && breakeven.value >= xLo && breakeven.value <= xHi) {
    crossing = { px: pxOf(breakeven.value), label: money(breakeven.value) };
  } else {
    badge = NO_BREAKEVEN_BADGE;
  }
  return { width, height, linePath, zeroY: pyOf(0), crossing, badge };
}

export function renderSweepChart(model: SweepChartModel): string {
  const crossing = model.crossing
    ? `<g class="crossing">` +
      `<line x1="${fmt(model.crossing.px)}" x2="${fmt(model.crossing.px)}" y1="${PAD.top}" y2="${model.height - PAD.bottom}"></line>` +
      `<text x="${fmt(model.crossing.px + 4)}" y="${PAD.top + 10}">${escapeXml(model.crossing.label)}</text>` +
      `</g>`
    : "";
  const badge = model.badge
    ? `<text class="badge" x="${model.width - PAD.right}" y="${PAD.top + 2}" text-anchor="end">${escapeXml(model.badge)}</text>`
    : "";
  return (
    `<svg viewBox="0 0 ${model.width} ${model.height}" role="img" aria-label="profit along the swept axis">` +
    `<line class="zero-line" x1="${PAD.left}" x2="${model.width - PAD.right}" y1="${fmt(model.zeroY)}" y2="${fmt(model.zeroY)}"></line>` +
    `<path class="sweep-line" d="${model.linePath}" fill="none"></path>` +
    crossing +
    badge +
    `</svg>`
  );
}

const fmt = (v: number) => (Math.round(v * 100) / 100).toString();

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
