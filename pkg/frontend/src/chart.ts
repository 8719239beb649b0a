/** SVG progress chart: one bar per reported assignment, chronological.
 *
 * Bar heights scale the server's meanBestPercent against the fixed 0..100
 * axis; the printed labels are the raw response values.
 */

import { show } from "./dom.js";
import type { ProgressChartSeries } from "./types.js";

const WIDTH = 640;
const HEIGHT = 220;
const BASE = 190;
const BAR_AREA = 160;

export function progressChart(series: ProgressChartSeries): string {
  const points = series.points;
  if (points.length === 0) {
    return "";
  }
  const slot = Math.min(90, Math.floor((WIDTH - 60) / points.length));
  const bar = Math.max(14, Math.floor(slot * 0.55));
  const pieces: string[] = [];
  pieces.push(
    `<line x1="40" y1="${BASE}" x2="${WIDTH - 10}" y2="${BASE}" class="axis"></line>`,
    `<line x1="40" y1="${BASE - BAR_AREA}" x2="40" y2="${BASE}" class="axis"></line>`,
    `<text x="8" y="${BASE}" class="tick">0</text>`,
    `<text x="8" y="${BASE - BAR_AREA + 10}" class="tick">100</text>`,
  );
  points.forEach((point, index) => {
    const x = 50 + index * slot;
    const height = Math.round((point.meanBestPercent / 100) * BAR_AREA);
    const y = BASE - height;
    pieces.push(
      `<g class="bar" data-assignment-id="${show(point.assignmentId)}">` +
        `<rect x="${x}" y="${y}" width="${bar}" height="${height}"></rect>` +
        `<text x="${x + bar / 2}" y="${y - 6}" class="value">${show(point.meanBestPercent)}</text>` +
        `<text x="${x + bar / 2}" y="${BASE + 14}" class="label">${show(point.assignedDate)}</text>` +
        `</g>`,
    );
  });
  return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" class="progress-chart" role="img">${pieces.join("")}</svg>`;
}
