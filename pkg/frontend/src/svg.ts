/** Minimal deterministic SVG chart rendering (no timestamps, fixed
 * geometry, fixed palette), enough for line overlays and bar charts. */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  emphasis?: boolean;
}

export interface LinePanel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

export interface BarChart {
  title: string;
  xLabel: string;
  yLabel: string;
  labels: string[];
  values: number[];
  overlay?: { label: string; values: number[] };
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
const MARGIN = { top: 34, right: 120, bottom: 44, left: 64 };

function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

function tickLabel(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-2)) {
    return v.toExponential(1);
  }
  const s = v.toPrecision(3);
  return String(Number(s));
}

export function linearScale(domain: [number, number], range: [number, number]) {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) {
    return [lo];
  }
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => c >= rawStep) ?? candidates[candidates.length - 1]!;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new Error("cannot plot a series without finite values");
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

function renderPanel(panel: LinePanel, width: number, height: number, yOffset: number): string {
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const xs = panel.series.flatMap((s) => s.x);
  const ys = panel.series.flatMap((s) => s.y);
  const xDomain = extent(xs);
  const yDomain = extent(ys);
  const sx = linearScale(xDomain, [MARGIN.left, MARGIN.left + plotW]);
  const sy = linearScale(yDomain, [yOffset + MARGIN.top + plotH, yOffset + MARGIN.top]);
  const parts: string[] = [];
  parts.push(
    `<text x="${MARGIN.left}" y="${yOffset + 20}" font-size="15" font-weight="bold">${panel.title}</text>`,
  );
  const axisY0 = yOffset + MARGIN.top + plotH;
  parts.push(
    `<rect x="${MARGIN.left}" y="${yOffset + MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  for (const t of niceTicks(xDomain[0], xDomain[1])) {
    const px = fmt(sx(t));
    parts.push(`<line x1="${px}" y1="${axisY0}" x2="${px}" y2="${axisY0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${px}" y="${axisY0 + 18}" font-size="11" text-anchor="middle">${tickLabel(t)}</text>`,
    );
  }
  for (const t of niceTicks(yDomain[0], yDomain[1])) {
    const py = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${py}" x2="${MARGIN.left}" y2="${py}" stroke="#333"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${tickLabel(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${axisY0 + 36}" font-size="12" text-anchor="middle">${panel.xLabel}</text>`,
  );
  parts.push(
    `<text x="18" y="${yOffset + MARGIN.top + plotH / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${yOffset + MARGIN.top + plotH / 2})">${panel.yLabel}</text>`,
  );
  panel.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const points = s.x.map((vx, k) => `${fmt(sx(vx))},${fmt(sy(s.y[k]!))}`).join(" ");
    const widthAttr = s.emphasis ? 3.5 : 1.5;
    if (s.x.length === 1) {
      const [px, py] = points.split(",");
      parts.push(
        `<circle class="series" cx="${px}" cy="${py}" r="3" fill="${color}"><title>${s.label}</title></circle>`,
      );
    } else {
      parts.push(
        `<polyline class="series" fill="none" stroke="${color}" stroke-width="${widthAttr}" points="${points}"><title>${s.label}</title></polyline>`,
      );
    }
    const ly = yOffset + MARGIN.top + 16 * i + 6;
    const lx = MARGIN.left + plotW + 10;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 20}" y2="${ly}" stroke="${color}" stroke-width="${widthAttr}"/>`,
    );
    parts.push(`<text x="${lx + 25}" y="${ly + 4}" font-size="11">${s.label}</text>`);
  });
  return parts.join("\n");
}

export function renderLineFigure(panels: LinePanel[], width = 800, panelHeight = 420): string {
  const height = panelHeight * panels.length;
  const body = panels
    .map((panel, i) => renderPanel(panel, width, panelHeight, i * panelHeight))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}

export function renderBarFigure(chart: BarChart, width = 800, height = 420): string {
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const all = chart.overlay ? chart.values.concat(chart.overlay.values) : chart.values;
  const yDomain: [number, number] = [0, Math.max(...all) * 1.1];
  const sy = linearScale(yDomain, [MARGIN.top + plotH, MARGIN.top]);
  const n = chart.values.length;
  const slot = plotW / n;
  const barW = slot * 0.7;
  const parts: string[] = [];
  parts.push(`<text x="${MARGIN.left}" y="20" font-size="15" font-weight="bold">${chart.title}</text>`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  for (const t of niceTicks(yDomain[0], yDomain[1])) {
    const py = fmt(sy(t));
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${py}" x2="${MARGIN.left}" y2="${py}" stroke="#333"/>`);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${tickLabel(t)}</text>`,
    );
  }
  chart.values.forEach((v, i) => {
    const x = MARGIN.left + slot * i + (slot - barW) / 2;
    const y = sy(v);
    const h = MARGIN.top + plotH - y;
    parts.push(
      `<rect class="bar" x="${fmt(x)}" y="${fmt(y)}" width="${fmt(barW)}" height="${fmt(h)}" fill="${PALETTE[0]}"><title>${chart.labels[i]}: ${v.toFixed(4)}</title></rect>`,
    );
    parts.push(
      `<text x="${fmt(x + barW / 2)}" y="${MARGIN.top + plotH + 16}" font-size="11" text-anchor="middle">${chart.labels[i]}</text>`,
    );
  });
  if (chart.overlay) {
    const points = chart.overlay.values
      .map((v, i) => `${fmt(MARGIN.left + slot * i + slot / 2)},${fmt(sy(v))}`)
      .join(" ");
    parts.push(
      `<polyline class="overlay" fill="none" stroke="${PALETTE[1]}" stroke-width="2" stroke-dasharray="5,3" points="${points}"><title>${chart.overlay.label}</title></polyline>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${MARGIN.top + plotH + 36}" font-size="12" text-anchor="middle">${chart.xLabel}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${chart.yLabel}</text>`,
  );
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${parts.join("\n")}\n</svg>\n`
  );
}
