import { describe, expect, it } from "vitest";

import { colorOf, heatColor, TYPE_COLORS } from "./colors.js";

describe("type colors", () => {
  it("gives every server type a distinct color, normal muted", () => {
    const values = Object.values(TYPE_COLORS);
    expect(new Set(values).size).toBe(4);
    expect(colorOf("I")).toBe(TYPE_COLORS.I);
    expect(colorOf("normal")).toBe("#8a93a6");
  });
});

describe("heatColor", () => {
  it("returns valid rgb strings over the whole range and clamps outside", () => {
    for (const t of [-1, 0, 0.25, 0.5, 0.75, 1, 2]) {
      expect(heatColor(t)).toMatch(/^rgb\(\d+,\d+,\d+\)$/);
    }
    expect(heatColor(-5)).toBe(heatColor(0));
    expect(heatColor(5)).toBe(heatColor(1));
  });
});
