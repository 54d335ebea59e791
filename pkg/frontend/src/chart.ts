// Minimal SVG line chart; points are exactly the series handed in.

export interface Series {
  label: string;
  color: string;
  values: number[];
}

export interface ChartPoint {
  x: number;
  y: number;
}

const WIDTH = 640;
const HEIGHT = 320;
const PAD = 40;

export function scalePoints(values: number[], lo: number, hi: number): ChartPoint[] {
  const n = values.length;
  const span = hi - lo || 1;
  return values.map((v, i) => ({
    x: PAD + (n === 1 ? 0 : (i * (WIDTH - 2 * PAD)) / (n - 1)),
    y: HEIGHT - PAD - ((v - lo) * (HEIGHT - 2 * PAD)) / span,
  }));
}

export function renderLineChart(labels: string[], series: Series[]): string {
  const all = series.flatMap((s) => s.values);
  if (all.length === 0) return `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}"></svg>`;
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const lines = series.map((s) => {
    const pts = scalePoints(s.values, lo, hi)
      .map((p) => `${p.x.toFixed(2)},${p.y.toFixed(2)}`)
      .join(" ");
    return `<polyline fill="none" stroke="${s.color}" stroke-width="2" ` +
      `data-series="${s.label}" data-values="${s.values.join(",")}" points="${pts}"/>`;
  });
  const legend = series.map((s, i) =>
    `<text x="${PAD + i * 160}" y="20" fill="${s.color}">${s.label}</text>`);
  const ticks = labels.map((l, i) => {
    const x = PAD + (labels.length === 1 ? 0 : (i * (WIDTH - 2 * PAD)) / (labels.length - 1));
    return `<text x="${x.toFixed(2)}" y="${HEIGHT - 12}" font-size="10" ` +
      `text-anchor="middle">${l}</text>`;
  });
  return `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
    legend.join("") + lines.join("") + ticks.join("") + `</svg>`;
}
