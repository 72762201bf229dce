/**
 * Figure renderers over governability record files.
 *
 * The plotting layer renders the columns it is given; the one computation
 * it owns is the combined-threshold lattice for the heatmap, which is pure
 * arithmetic on the cycle-size/threshold grid.
 */

import {
  MARGIN,
  HEIGHT,
  WIDTH,
  axes,
  document,
  element,
  fmt,
  linearScale,
  text,
} from "./svg.js";
import {
  PhaseRecord,
  SchemaError,
  ThetaRecord,
  parsePhaseRecords,
  parseThetaRecords,
} from "./records.js";

export const GOVERNABLE_COLOR = "#2e8b57";
export const UNGOVERNABLE_COLOR = "#c0392b";
export const INDETERMINATE_COLOR = "#e6a23c";
export const THRESHOLD_COLOR = "#333333";
export const BUDGET_COLOR = "#1f5fa8";

/** Fixed classification-to-color mapping; the scatter never re-derives a
 * verdict from the numeric columns. */
export function classificationColor(classification: string): string {
  switch (classification) {
    case "Governable":
      return GOVERNABLE_COLOR;
    case "Ungovernable":
      return UNGOVERNABLE_COLOR;
    case "Indeterminate":
      return INDETERMINATE_COLOR;
    default:
      throw new SchemaError(`no color assigned to classification '${classification}'`);
  }
}

export interface ScatterPoint {
  lambdaHat: number;
  deficit: number;
  color: string;
  classification: string;
}

/** Rows that can be placed on the plane: collectives without mixed cycles
 * carry no compound autonomy and are counted in the caption instead. */
export function extractScatterPoints(records: PhaseRecord[]): ScatterPoint[] {
  return records
    .filter((r) => r.lambdaHat !== null)
    .map((r) => ({
      lambdaHat: r.lambdaHat as number,
      deficit: r.deficit,
      color: classificationColor(r.classification),
      classification: r.classification,
    }));
}

function unitTicks(scale: (v: number) => number) {
  return [0, 0.25, 0.5, 0.75, 1].map((value) => ({ value, at: scale(value) }));
}

export function renderScatter(records: PhaseRecord[]): string {
  const points = extractScatterPoints(records);
  if (points.length === 0) {
    throw new SchemaError("phase records contain no plottable rows");
  }
  const sx = linearScale(0, 1, MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(0, 1, HEIGHT - MARGIN.bottom, MARGIN.top);
  const body: string[] = [];
  body.push(...axes("min compound autonomy", "accountability deficit", unitTicks(sx), unitTicks(sy)));

  const horizons = Array.from(
    new Set(records.filter((r) => r.horizon !== null).map((r) => r.horizon as number))
  ).sort((a, b) => a - b);
  for (const horizon of horizons) {
    body.push(
      element("line", {
        x1: sx(horizon),
        y1: sy(0),
        x2: sx(horizon),
        y2: sy(1),
        stroke: THRESHOLD_COLOR,
        "stroke-dasharray": "6,4",
      })
    );
    body.push(text(sx(horizon), MARGIN.top - 6, `horizon ${horizon.toFixed(3)}`, "middle", 11));
  }

  for (const point of points) {
    body.push(
      element("circle", {
        cx: sx(point.lambdaHat),
        cy: sy(Math.min(point.deficit, 1)),
        r: 3.5,
        fill: point.color,
        "fill-opacity": "0.75",
        "data-classification": point.classification,
      })
    );
  }
  const skipped = records.length - points.length;
  if (skipped > 0) {
    body.push(
      text(
        WIDTH - MARGIN.right,
        HEIGHT - 12,
        `${skipped} collectives without mixed cycles omitted`,
        "end",
        11
      )
    );
  }
  return document(body, "Deficit against minimum compound autonomy");
}

/** Consecutive grid points the budget-equals-one line falls between. */
export function findBudgetCrossing(records: ThetaRecord[]): [number, number] | null {
  const sorted = [...records].sort((a, b) => a.theta - b.theta);
  for (let i = 0; i + 1 < sorted.length; i += 1) {
    if (sorted[i].budget > 1 && sorted[i + 1].budget <= 1) {
      return [sorted[i].theta, sorted[i + 1].theta];
    }
  }
  return null;
}

export function renderPhaseCurves(records: ThetaRecord[]): string {
  if (records.length === 0) {
    throw new SchemaError("theta records contain no rows");
  }
  const sorted = [...records].sort((a, b) => a.theta - b.theta);
  const maxBudget = Math.max(1.2, ...sorted.map((r) => r.budget));
  const sx = linearScale(0, 1, MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(0, maxBudget, HEIGHT - MARGIN.bottom, MARGIN.top);
  const body: string[] = [];
  const yTicks = [0, 0.25, 0.5, 0.75, 1].map((f) => ({
    value: f * maxBudget,
    at: sy(f * maxBudget),
  }));
  body.push(...axes("joint autonomy scaling", "epistemic budget / deficit", unitTicks(sx), yTicks));

  body.push(
    element("line", {
      x1: sx(0),
      y1: sy(1),
      x2: sx(1),
      y2: sy(1),
      stroke: THRESHOLD_COLOR,
      "stroke-dasharray": "6,4",
    })
  );
  body.push(text(sx(0) + 6, sy(1) - 6, "full allocation", "start", 11));

  const path = (values: (r: ThetaRecord) => number, color: string) =>
    element("path", {
      d: sorted
        .map((r, i) => `${i === 0 ? "M" : "L"}${fmt(sx(r.theta))},${fmt(sy(values(r)))}`)
        .join(""),
      fill: "none",
      stroke: color,
      "stroke-width": 2,
    });
  body.push(path((r) => r.budget, BUDGET_COLOR));
  body.push(path((r) => r.deficit, UNGOVERNABLE_COLOR));
  for (const r of sorted) {
    body.push(
      element("circle", { cx: sx(r.theta), cy: sy(r.budget), r: 3, fill: BUDGET_COLOR })
    );
    body.push(
      element("circle", { cx: sx(r.theta), cy: sy(r.deficit), r: 3, fill: UNGOVERNABLE_COLOR })
    );
  }

  const crossing = findBudgetCrossing(sorted);
  if (crossing) {
    const [a, b] = crossing;
    body.push(
      element("rect", {
        x: sx(a),
        y: MARGIN.top,
        width: sx(b) - sx(a),
        height: HEIGHT - MARGIN.top - MARGIN.bottom,
        fill: THRESHOLD_COLOR,
        "fill-opacity": "0.08",
        "data-crossing": `${a},${b}`,
      })
    );
    body.push(text(sx((a + b) / 2), MARGIN.top + 14, `crossing in [${a}, ${b}]`, "middle", 11));
  }
  body.push(text(WIDTH - MARGIN.right, MARGIN.top + 14, "budget", "end", 12));
  body.push(text(WIDTH - MARGIN.right, MARGIN.top + 30, "deficit", "end", 12));
  return document(body, "Budget and deficit under joint autonomy scaling");
}

export const HEATMAP_CYCLE_SIZES = [2, 3, 4, 5, 6, 7, 8, 9, 10];
export const HEATMAP_TAU_GRID = Array.from({ length: 19 }, (_, i) =>
  Number(((i + 1) * 0.05).toFixed(2))
);

/** Combined threshold: the structural bound capped by the non-triviality
 * requirement. The sole piece of arithmetic the figure layer owns. */
export function heatmapValue(cMinSize: number, tau: number): number {
  return Math.min(1 - 1 / cMinSize, 1 - tau);
}

function heatColor(value: number): string {
  // red (0) -> yellow (0.5) -> green (1); endpoints fixed, no palettes
  const clamped = Math.max(0, Math.min(1, value));
  const mix = (lo: number, hi: number, t: number) => Math.round(lo + (hi - lo) * t);
  if (clamped < 0.5) {
    const t = clamped / 0.5;
    return `rgb(${mix(192, 230, t)},${mix(57, 190, t)},${mix(43, 60, t)})`;
  }
  const t = (clamped - 0.5) / 0.5;
  return `rgb(${mix(230, 46, t)},${mix(190, 139, t)},${mix(60, 87, t)})`;
}

export function renderHeatmap(): string {
  const body: string[] = [];
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + 10;
  const cellW = (WIDTH - MARGIN.left - MARGIN.right) / HEATMAP_TAU_GRID.length;
  const cellH = (HEIGHT - MARGIN.top - MARGIN.bottom - 10) / HEATMAP_CYCLE_SIZES.length;
  for (let row = 0; row < HEATMAP_CYCLE_SIZES.length; row += 1) {
    const c = HEATMAP_CYCLE_SIZES[row];
    for (let col = 0; col < HEATMAP_TAU_GRID.length; col += 1) {
      const tau = HEATMAP_TAU_GRID[col];
      const value = heatmapValue(c, tau);
      body.push(
        element("rect", {
          x: x0 + col * cellW,
          y: y0 + row * cellH,
          width: cellW,
          height: cellH,
          fill: heatColor(value),
          "data-value": value.toFixed(4),
        })
      );
      body.push(
        text(
          x0 + col * cellW + cellW / 2,
          y0 + row * cellH + cellH / 2 + 4,
          value.toFixed(2),
          "middle",
          9
        )
      );
    }
    body.push(text(x0 - 10, y0 + row * cellH + cellH / 2 + 4, String(c), "end", 11));
  }
  for (let col = 0; col < HEATMAP_TAU_GRID.length; col += 2) {
    body.push(
      text(
        x0 + col * cellW + cellW / 2,
        HEIGHT - MARGIN.bottom + 16,
        HEATMAP_TAU_GRID[col].toFixed(2),
        "middle",
        10
      )
    );
  }
  body.push(text((x0 + WIDTH - MARGIN.right) / 2, HEIGHT - 12, "non-triviality threshold"));
  body.push(
    element(
      "text",
      {
        x: 16,
        y: (y0 + HEIGHT - MARGIN.bottom) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        "font-family": "sans-serif",
        transform: `rotate(-90 16 ${fmt((y0 + HEIGHT - MARGIN.bottom) / 2)})`,
      },
      "smallest mixed cycle size"
    )
  );
  return document(body, "Combined horizon over cycle size and threshold");
}

export type FigureKind = "scatter" | "phase_curves" | "heatmap";

export interface FigureJob {
  kind: FigureKind;
  inputText?: string;
}

export function render(job: FigureJob): string {
  switch (job.kind) {
    case "scatter":
      if (job.inputText === undefined) {
        throw new SchemaError("scatter needs a phase record file");
      }
      return renderScatter(parsePhaseRecords(job.inputText));
    case "phase_curves":
      if (job.inputText === undefined) {
        throw new SchemaError("phase_curves needs a theta record file");
      }
      return renderPhaseCurves(parseThetaRecords(job.inputText));
    case "heatmap":
      return renderHeatmap();
    default:
      throw new SchemaError(`unknown figure kind '${job.kind as string}'`);
  }
}
