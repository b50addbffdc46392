import { describe, expect, it } from "vitest";

import {
  buildUpdate,
  describeUpdate,
  maskFromSteering,
  nodeName,
  rowSum,
  setPercent,
  toggleBlock,
  validateMask,
} from "../src/mask.js";
import type { SteeringDoc } from "../src/types.js";

const DOC: SteeringDoc = {
  hif: 1,
  entries: [
    { from: 2, to: 1, p: 0.5 },
    { from: 2, to: 4, p: 0.1 },
    { from: 0, to: 3, p: 0.2 },
  ],
  blocked: [
    { from: 2, to: 0 },
    { from: 3, to: 1 },
  ],
  version: 3,
};

describe("nodeName", () => {
  it("uses letters for small instances and indices for large ones", () => {
    expect(nodeName(0, 5)).toBe("A");
    expect(nodeName(4, 5)).toBe("E");
    expect(nodeName(25, 26)).toBe("Z");
    expect(nodeName(4, 27)).toBe("4");
  });
});

describe("maskFromSteering", () => {
  it("picks up only the opened row", () => {
    const mask = maskFromSteering(2, 5, DOC);
    expect([...mask.percents.entries()].sort()).toEqual([
      [1, 50],
      [4, 10],
    ]);
    expect([...mask.blocked]).toEqual([0]);
  });

  it("starts with an empty mask on an untouched row", () => {
    const mask = maskFromSteering(1, 5, DOC);
    expect(mask.percents.size).toBe(0);
    expect(mask.blocked.size).toBe(0);
  });
});

describe("validation", () => {
  it("accepts a row summing to exactly 100%", () => {
    const mask = maskFromSteering(1, 5, DOC);
    setPercent(mask, 0, 60);
    setPercent(mask, 2, 40);
    expect(rowSum(mask)).toBe(100);
    expect(validateMask(mask)).toBeNull();
  });

  it("rejects a row summing to 105% and names the sum", () => {
    const mask = maskFromSteering(1, 5, DOC);
    setPercent(mask, 2, 55);
    setPercent(mask, 3, 50);
    expect(rowSum(mask)).toBe(105);
    expect(validateMask(mask)).toBe("row sums to 105%, exceeding 100%");
  });

  it("rejects out-of-range single values", () => {
    const mask = maskFromSteering(1, 5, DOC);
    setPercent(mask, 2, -5);
    expect(validateMask(mask)).toContain("between 0% and 100%");
    setPercent(mask, 2, 101);
    expect(validateMask(mask)).toContain("between 0% and 100%");
    setPercent(mask, 2, Number.NaN);
    expect(validateMask(mask)).not.toBeNull();
  });

  it("refuses the diagonal", () => {
    const mask = maskFromSteering(1, 5, DOC);
    expect(() => setPercent(mask, 1, 10)).toThrow("diagonal");
  });
});

describe("buildUpdate", () => {
  it("emits only changed probabilities as fractions", () => {
    const mask = maskFromSteering(2, 5, DOC);
    setPercent(mask, 1, 50); // unchanged
    setPercent(mask, 3, 25); // new
    const update = buildUpdate(mask);
    expect(update.entries).toEqual([{ from: 2, to: 3, p: 0.25 }]);
    expect(update.block).toBeUndefined();
    expect(update.unblock).toBeUndefined();
  });

  it("clears a probability by sending p=0", () => {
    const mask = maskFromSteering(2, 5, DOC);
    setPercent(mask, 1, 0);
    const update = buildUpdate(mask);
    expect(update.entries).toEqual([{ from: 2, to: 1, p: 0 }]);
  });

  it("diffs blocks and unblocks against the opened state", () => {
    const mask = maskFromSteering(2, 5, DOC);
    expect(toggleBlock(mask, 3)).toBe(true); // new block
    expect(toggleBlock(mask, 0)).toBe(false); // lift the existing one
    const update = buildUpdate(mask);
    expect(update.block).toEqual([{ from: 2, to: 3 }]);
    expect(update.unblock).toEqual([{ from: 2, to: 0 }]);
    expect(update.entries).toBeUndefined();
  });

  it("returns an empty object when nothing changed", () => {
    const mask = maskFromSteering(2, 5, DOC);
    expect(buildUpdate(mask)).toEqual({});
  });
});

describe("describeUpdate", () => {
  it("summarizes every part of a delta", () => {
    const text = describeUpdate(
      {
        hif: 0.8,
        entries: [{ from: 1, to: 2, p: 0.5 }],
        block: [{ from: 0, to: 3 }],
        unblock: [{ from: 2, to: 0 }],
      },
      5,
    );
    expect(text).toBe("hif 0.8, B>C 50%, block A>D, unblock C>A");
  });
});
