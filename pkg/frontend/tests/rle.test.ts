import { describe, expect, it } from "vitest";

import { countOnes, decodeRle, encodeRle } from "../src/rle.js";
import type { RleMask, RunTrace } from "../src/types.js";
import { fixtureJson, mulberry32, randomBits } from "./helpers.js";

describe("decodeRle", () => {
  it("expands alternating runs starting with the zero run", () => {
    const decoded = decodeRle({ size: [2, 3], counts: [1, 3, 2] });
    expect(Array.from(decoded.bits)).toEqual([0, 1, 1, 1, 0, 0]);
    expect(decoded.height).toBe(2);
    expect(decoded.width).toBe(3);
  });

  it("handles a mask that starts with a set pixel", () => {
    const decoded = decodeRle({ size: [1, 2], counts: [0, 2] });
    expect(Array.from(decoded.bits)).toEqual([1, 1]);
  });

  it("handles an all-zero mask", () => {
    const decoded = decodeRle({ size: [2, 2], counts: [4] });
    expect(countOnes(decoded.bits)).toBe(0);
  });

  it.each<[string, RleMask]>([
    ["short runs", { size: [2, 2], counts: [3] }],
    ["long runs", { size: [2, 2], counts: [5] }],
    ["negative run", { size: [1, 4], counts: [-1, 5] }],
    ["fractional run", { size: [1, 4], counts: [1.5, 2.5] }],
    ["fractional size", { size: [1.5, 4] as unknown as [number, number], counts: [6] }],
  ])("rejects %s", (_label, mask) => {
    expect(() => decodeRle(mask)).toThrow();
  });
});

describe("encodeRle", () => {
  it("starts with the zero run even when the first pixel is set", () => {
    const mask = encodeRle({ height: 1, width: 3, bits: new Uint8Array([1, 1, 0]) });
    expect(mask.counts[0]).toBe(0);
    expect(mask.counts).toEqual([0, 2, 1]);
  });

  it("round trips random masks", () => {
    const rand = mulberry32(99);
    for (let i = 0; i < 60; i++) {
      const height = 1 + Math.floor(rand() * 24);
      const width = 1 + Math.floor(rand() * 24);
      const bits = randomBits(rand, height * width, rand());
      const mask = encodeRle({ height, width, bits });
      const back = decodeRle(mask);
      expect(Array.from(back.bits)).toEqual(Array.from(bits));
      if (bits[0] === 1) expect(mask.counts[0]).toBe(0);
    }
  });

  it("rejects bits that do not match the size", () => {
    expect(() => encodeRle({ height: 2, width: 2, bits: new Uint8Array(3) })).toThrow();
  });
});

describe("served mask fixtures", () => {
  it("decodes to exactly the pixel count the grounding stage reported", () => {
    const mask = fixtureJson<RleMask>("scoop-mask.json");
    const trace = fixtureJson<RunTrace>("scoop-trace.json");
    const grounding = trace.stages.find((s) => s.name === "grounding");
    const decoded = decodeRle(mask);
    expect(decoded.height).toBe(mask.size[0]);
    expect(decoded.width).toBe(mask.size[1]);
    expect(countOnes(decoded.bits)).toBe(grounding?.data?.mask_pixels);
  });

  it("re-encodes a served mask to the identical wire payload", () => {
    const mask = fixtureJson<RleMask>("mug-mask.json");
    const again = encodeRle(decodeRle(mask));
    expect(again).toEqual(mask);
  });
});
