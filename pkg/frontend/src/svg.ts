/**
 * Dependency-free SVG plotting: a line chart for convergence traces and a
 * mean-with-interval chart for sweeps. Styles are fixed per scheme so
 * regenerated figures are comparable.
 */

import { Series } from "./series";

interface Style {
  color: string;
  dash: string;
  marker: "circle" | "square" | "diamond" | "triangle";
}

const SCHEME_STYLES: Record<string, Style> = {
  proposed: { color: "#1f77b4", dash: "", marker: "circle" },
  "mmse-sdr": { color: "#d62728", dash: "6 3", marker: "square" },
  "mmse-qcqp": { color: "#2ca02c", dash: "6 3 2 3", marker: "diamond" },
  mrt: { color: "#9467bd", dash: "2 3", marker: "triangle" },
};

const FALLBACK_STYLE: Style = { color: "#7f7f7f", dash: "4 2", marker: "circle" };

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 16, top: 18, bottom: 46 };

function styleFor(name: string): Style {
  return SCHEME_STYLES[name] ?? FALLBACK_STYLE;
}

function extent(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

function ticks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const first = Math.ceil(lo / chosen) * chosen;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += chosen) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

function marker(style: Style, x: number, y: number): string {
  const r = 3.4;
  switch (style.marker) {
    case "circle":
      return `<circle cx="${x}" cy="${y}" r="${r}" fill="${style.color}"/>`;
    case "square":
      return `<rect x="${x - r}" y="${y - r}" width="${2 * r}" height="${2 * r}" fill="${style.color}"/>`;
    case "diamond":
      return `<path d="M ${x} ${y - r * 1.3} L ${x + r * 1.3} ${y} L ${x} ${y + r * 1.3} L ${x - r * 1.3} ${y} Z" fill="${style.color}"/>`;
    case "triangle":
      return `<path d="M ${x} ${y - r * 1.3} L ${x + r * 1.25} ${y + r} L ${x - r * 1.25} ${y + r} Z" fill="${style.color}"/>`;
  }
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChart(series: Series[], xLabel: string, yLabel: string,
                            withIntervals: boolean): string {
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) =>
    s.points.flatMap((p) => withIntervals ? [p.y, p.lo ?? p.y, p.hi ?? p.y] : [p.y]));
  const [x0, x1] = extent(xs);
  const [y0, y1] = extent(ys);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW;
  const sy = (y: number) => MARGIN.top + (1 - (y - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  for (const t of ticks(x0, x1)) {
    const x = sx(t);
    parts.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${HEIGHT - MARGIN.bottom}" stroke="#eee"/>`);
    parts.push(`<text x="${x}" y="${HEIGHT - MARGIN.bottom + 16}" text-anchor="middle">${t}</text>`);
  }
  for (const t of ticks(y0, y1)) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="#eee"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${Number(t.toPrecision(6))}</text>`);
  }
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`);
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 8}" text-anchor="middle">${esc(xLabel)}</text>`);
  parts.push(`<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(yLabel)}</text>`);

  for (const s of series) {
    const style = styleFor(s.name);
    if (withIntervals) {
      for (const p of s.points) {
        if (p.lo === undefined || p.hi === undefined) continue;
        const x = sx(p.x);
        parts.push(`<line x1="${x}" y1="${sy(p.lo)}" x2="${x}" y2="${sy(p.hi)}" stroke="${style.color}" stroke-width="1.2"/>`);
        for (const v of [p.lo, p.hi]) {
          parts.push(`<line x1="${x - 4}" y1="${sy(v)}" x2="${x + 4}" y2="${sy(v)}" stroke="${style.color}" stroke-width="1.2"/>`);
        }
      }
    }
    const path = s.points.map((p) => `${sx(p.x)},${sy(p.y)}`).join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="${style.color}" stroke-width="1.8"${style.dash ? ` stroke-dasharray="${style.dash}"` : ""}/>`);
    for (const p of s.points) {
      parts.push(marker(style, sx(p.x), sy(p.y)));
    }
  }

  series.forEach((s, i) => {
    const style = styleFor(s.name);
    const y = MARGIN.top + 14 + 18 * i;
    const x = MARGIN.left + 12;
    parts.push(`<line x1="${x}" y1="${y - 4}" x2="${x + 26}" y2="${y - 4}" stroke="${style.color}" stroke-width="1.8"${style.dash ? ` stroke-dasharray="${style.dash}"` : ""}/>`);
    parts.push(marker(style, x + 13, y - 4));
    parts.push(`<text x="${x + 32}" y="${y}">${esc(s.name)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
