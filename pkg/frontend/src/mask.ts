// Edit-mask model for one row of the interaction matrix.  Validation here
// mirrors the server rule (row mass <= 100%) so a bad frame is stopped
// before it is sent; the server remains authoritative and re-checks.

import type { SteeringDoc, SteeringUpdate } from "./types.js";

export function nodeName(i: number, n: number): string {
  return n <= 26 ? String.fromCharCode(65 + i) : String(i);
}

export interface MaskState {
  row: number;
  n: number;
  percents: Map<number, number>; // target -> percent, 0..100
  blocked: Set<number>;
  basePercents: Map<number, number>;
  baseBlocked: Set<number>;
}

export function maskFromSteering(row: number, n: number, doc: SteeringDoc): MaskState {
  const percents = new Map<number, number>();
  const blocked = new Set<number>();
  for (const e of doc.entries) {
    // trim float noise (0.1 * 100 is 10.000000000000002) for display
    if (e.from === row) percents.set(e.to, +(e.p * 100).toFixed(9));
  }
  for (const b of doc.blocked) {
    if (b.from === row) blocked.add(b.to);
  }
  return {
    row,
    n,
    percents: new Map(percents),
    blocked: new Set(blocked),
    basePercents: percents,
    baseBlocked: new Set(blocked),
  };
}

export function setPercent(mask: MaskState, target: number, percent: number): void {
  if (target === mask.row) throw new Error("diagonal is not editable");
  mask.percents.set(target, percent);
}

export function toggleBlock(mask: MaskState, target: number): boolean {
  if (mask.blocked.has(target)) {
    mask.blocked.delete(target);
    return false;
  }
  mask.blocked.add(target);
  return true;
}

export function rowSum(mask: MaskState): number {
  let sum = 0;
  for (const v of mask.percents.values()) sum += v;
  return sum;
}

// Returns the inline error message, or null when the mask may be saved.
export function validateMask(mask: MaskState): string | null {
  for (const [target, pct] of mask.percents) {
    if (!Number.isFinite(pct) || pct < 0 || pct > 100) {
      return `value for ${nodeName(target, mask.n)} must be between 0% and 100%`;
    }
  }
  const sum = rowSum(mask);
  if (sum > 100 + 1e-9) {
    return `row sums to ${+sum.toFixed(6)}%, exceeding 100%`;
  }
  return null;
}

// Delta against the state the mask was opened from: changed probabilities
// (a cleared value rides along as p=0) plus block/unblock toggles.
export function buildUpdate(mask: MaskState): SteeringUpdate {
  const update: SteeringUpdate = {};
  const entries = [];
  for (const [target, pct] of mask.percents) {
    const base = mask.basePercents.get(target) ?? 0;
    if (pct !== base) {
      entries.push({ from: mask.row, to: target, p: pct / 100 });
    }
  }
  for (const [target, base] of mask.basePercents) {
    if (base > 0 && !mask.percents.has(target)) {
      entries.push({ from: mask.row, to: target, p: 0 });
    }
  }
  if (entries.length > 0) update.entries = entries;
  const block = [...mask.blocked]
    .filter((t) => !mask.baseBlocked.has(t))
    .map((t) => ({ from: mask.row, to: t }));
  const unblock = [...mask.baseBlocked]
    .filter((t) => !mask.blocked.has(t))
    .map((t) => ({ from: mask.row, to: t }));
  if (block.length > 0) update.block = block;
  if (unblock.length > 0) update.unblock = unblock;
  return update;
}

export function describeUpdate(update: SteeringUpdate, n: number): string {
  const parts: string[] = [];
  if (update.hif !== undefined) parts.push(`hif ${update.hif}`);
  for (const e of update.entries ?? []) {
    parts.push(`${nodeName(e.from, n)}>${nodeName(e.to, n)} ${+(e.p * 100).toFixed(4)}%`);
  }
  for (const b of update.block ?? []) {
    parts.push(`block ${nodeName(b.from, n)}>${nodeName(b.to, n)}`);
  }
  for (const b of update.unblock ?? []) {
    parts.push(`unblock ${nodeName(b.from, n)}>${nodeName(b.to, n)}`);
  }
  return parts.join(", ");
}
