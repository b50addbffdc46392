// Canvas drawing for the session view.  The renderer works against a
// minimal 2D-context interface so tests can substitute a recording stub;
// a real CanvasRenderingContext2D satisfies it structurally.

import type { Point } from "./projection.js";
import type { SteeringDoc } from "./types.js";

export interface Context2DLike {
  strokeStyle: string;
  fillStyle: string;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  setLineDash(segments: number[]): void;
}

export const BEST_COLOR = "#18a034"; // current shortest tour, green
export const OPTIMAL_COLOR = "#d62828"; // exact optimum overlay, red
export const TRAIL_COLOR = "#8a8a8a";
export const NODE_COLOR = "#2457a8"; // blue squares
export const SELECTED_COLOR = "#18a034"; // selected node, green square
export const SYMMETRIC_COLOR = "#2b6cb0"; // both directions human-set
export const ASYMMETRIC_COLOR = "#d69e2e"; // one direction human-set
export const BLOCKED_COLOR = "#555555";

export const BEST_WIDTH = 3;
export const OPTIMAL_WIDTH = 2;

export interface View {
  width: number;
  height: number;
  points: Point[];
  labels: string[];
  pheromone: { matrix: number[][]; min: number; max: number } | null;
  bestOrder: number[] | null;
  optimalOrder: number[] | null;
  steering: SteeringDoc | null;
  selected: number;
}

// Trail intensity maps to opacity on a log scale between the snapshot's
// min and max so faint-but-nonzero trails stay visible.
export function trailAlpha(tau: number, min: number, max: number): number {
  if (!(max > min)) return 0.5;
  const lo = Math.log(min);
  const span = Math.log(max) - lo;
  const t = (Math.log(tau) - lo) / span;
  return 0.05 + 0.9 * Math.min(1, Math.max(0, t));
}

function polyline(ctx: Context2DLike, pts: Point[], order: number[],
                  color: string, width: number): void {
  // One stroke for the whole tour keeps every edge the same width.
  ctx.setLineDash([]);
  ctx.globalAlpha = 1;
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  const [x0, y0] = pts[order[0]];
  ctx.moveTo(x0, y0);
  for (let i = 1; i < order.length; i++) {
    const [x, y] = pts[order[i]];
    ctx.lineTo(x, y);
  }
  ctx.closePath();
  ctx.stroke();
}

function edge(ctx: Context2DLike, a: Point, b: Point): void {
  ctx.beginPath();
  ctx.moveTo(a[0], a[1]);
  ctx.lineTo(b[0], b[1]);
  ctx.stroke();
}

function drawTrails(ctx: Context2DLike, view: View): void {
  const ph = view.pheromone;
  if (ph === null) return;
  ctx.setLineDash([]);
  ctx.strokeStyle = TRAIL_COLOR;
  ctx.lineWidth = 1;
  const n = view.points.length;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      ctx.globalAlpha = trailAlpha(ph.matrix[i][j], ph.min, ph.max);
      edge(ctx, view.points[i], view.points[j]);
    }
  }
  ctx.globalAlpha = 1;
}

function drawSteering(ctx: Context2DLike, view: View): void {
  const st = view.steering;
  if (st === null) return;
  const has = new Set(st.entries.map((e) => `${e.from}:${e.to}`));
  // Human-set edges dim with the impact factor; blocks are absolute and
  // stay fully opaque.
  const alpha = 0.25 + 0.75 * st.hif;
  for (const e of st.entries) {
    const symmetric = has.has(`${e.to}:${e.from}`);
    if (symmetric && e.from > e.to) continue; // draw each pair once
    ctx.setLineDash([]);
    ctx.globalAlpha = alpha;
    ctx.strokeStyle = symmetric ? SYMMETRIC_COLOR : ASYMMETRIC_COLOR;
    ctx.lineWidth = 2;
    const a = view.points[e.from];
    const b = view.points[e.to];
    edge(ctx, a, b);
    ctx.fillStyle = ctx.strokeStyle;
    ctx.font = "11px sans-serif";
    const tag = symmetric ? `${Math.round(e.p * 100)}%` : `${Math.round(e.p * 100)}%>`;
    ctx.fillText(tag, (a[0] + b[0]) / 2 + 4, (a[1] + b[1]) / 2 - 4);
  }
  ctx.globalAlpha = 1;
  for (const blk of st.blocked) {
    ctx.setLineDash([5, 4]);
    ctx.strokeStyle = BLOCKED_COLOR;
    ctx.lineWidth = 2;
    const a = view.points[blk.from];
    const b = view.points[blk.to];
    edge(ctx, a, b);
    // strike-through cross at the midpoint
    const mx = (a[0] + b[0]) / 2;
    const my = (a[1] + b[1]) / 2;
    ctx.setLineDash([]);
    ctx.beginPath();
    ctx.moveTo(mx - 5, my - 5);
    ctx.lineTo(mx + 5, my + 5);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(mx - 5, my + 5);
    ctx.lineTo(mx + 5, my - 5);
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function drawNodes(ctx: Context2DLike, view: View): void {
  for (let i = 0; i < view.points.length; i++) {
    const [x, y] = view.points[i];
    ctx.globalAlpha = 1;
    ctx.fillStyle = i === view.selected ? SELECTED_COLOR : NODE_COLOR;
    ctx.fillRect(x - 4, y - 4, 8, 8);
    ctx.fillStyle = "#222222";
    ctx.font = "12px sans-serif";
    ctx.fillText(view.labels[i], x + 6, y - 6);
  }
}

export function render(ctx: Context2DLike, view: View): void {
  ctx.clearRect(0, 0, view.width, view.height);
  drawTrails(ctx, view);
  drawSteering(ctx, view);
  if (view.bestOrder !== null && view.bestOrder.length > 1) {
    polyline(ctx, view.points, view.bestOrder, BEST_COLOR, BEST_WIDTH);
  }
  if (view.optimalOrder !== null && view.optimalOrder.length > 1) {
    polyline(ctx, view.points, view.optimalOrder, OPTIMAL_COLOR, OPTIMAL_WIDTH);
  }
  drawNodes(ctx, view);
}
