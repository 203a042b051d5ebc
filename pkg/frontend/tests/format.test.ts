import { describe, expect, it } from "vitest";

import { formatPercent } from "../src/format.js";

describe("formatPercent", () => {
  it("rounds half-up to two decimals", () => {
    expect(formatPercent(0.15625)).toBe("15.63%");
    expect(formatPercent(0.25)).toBe("25.00%");
    expect(formatPercent(1 / 3)).toBe("33.33%");
    expect(formatPercent(0)).toBe("0.00%");
    expect(formatPercent(1)).toBe("100.00%");
  });

  it("half cases round up, not to even", () => {
    expect(formatPercent(0.125)).toBe("12.50%");
    expect(formatPercent(0.00005)).toBe("0.01%");
    expect(formatPercent(0.031250)).toBe("3.13%");
    expect(formatPercent(0.046875)).toBe("4.69%"); // 4.6875 -> 4.69
  });
});
