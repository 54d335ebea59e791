// Progress dashboard: actual vs target line chart plus the gap callout.

import { renderLineChart } from "./chart.js";
import type { ProgressSeries } from "./types.js";

export interface DashboardView {
  labels: string[];
  target: number[];
  actual: number[];
  gapLabel: string | null;
}

/** The chart data is the API series verbatim; no smoothing or resampling. */
export function toDashboardView(series: ProgressSeries): DashboardView {
  let gapLabel: string | null = null;
  if (series.final_gap_kg !== undefined) {
    const sign = series.final_gap_kg >= 0 ? "+" : "−";
    gapLabel = `${sign}${Math.abs(series.final_gap_kg).toFixed(0)} kg`;
  }
  return {
    labels: [...series.dates],
    target: [...series.target],
    actual: [...series.actual],
    gapLabel,
  };
}

export function renderDashboard(view: DashboardView): string {
  if (view.labels.length === 0) {
    return `<p class="empty-state">No progress entries yet.</p>`;
  }
  const chart = renderLineChart(view.labels, [
    { label: "target", color: "#1565c0", values: view.target },
    { label: "actual", color: "#c62828", values: view.actual },
  ]);
  const gap = view.gapLabel
    ? `<p class="gap">Gap to target: <strong data-gap>${view.gapLabel}</strong></p>`
    : "";
  return `<section class="dashboard">${chart}${gap}</section>`;
}
