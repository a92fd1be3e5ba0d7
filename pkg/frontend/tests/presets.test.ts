import { describe, expect, it } from "vitest";
import { FILTER_PRESETS, presetNames } from "../src/presets.js";

describe("filter preset table", () => {
  it("covers every published group", () => {
    const names = presetNames();
    for (const expected of [
      "W3", "W3n",
      "X1A", "X2A", "X3A", "X3An",
      "X1B", "X2B", "X3B", "X3Bn",
      "X1C", "X2C", "X3C", "X3Cn",
      "X1D", "X2D", "X3D", "X3Dn",
      "X3E",
    ]) {
      expect(names).toContain(expected);
    }
    expect(names).not.toContain("X3En");
  });

  it("X3D: fast & smooth character over the fast limits", () => {
    const p = FILTER_PRESETS["X3D"];
    expect(p.sigma).toBe(0.95);
    expect(p.rho).toBe(1.0);
    expect(p.velocity_limit).toBe(90);
    expect(p.acceleration_limit).toBe(700);
    expect(p.jerk_limit).toBe(50000);
    expect(p.order).toBe("C3");
    expect(p.limiter).toBe("tanh");
  });

  it("X3A: slow & smooth over the slow limits", () => {
    const p = FILTER_PRESETS["X3A"];
    expect(p.sigma).toBe(1.0);
    expect(p.velocity_limit).toBe(20);
    expect(p.acceleration_limit).toBe(100);
    expect(p.jerk_limit).toBe(10000);
  });

  it("n variants use the hard limiter, W bypasses the stabilizer", () => {
    expect(FILTER_PRESETS["X3An"].limiter).toBe("hard");
    expect(FILTER_PRESETS["W3"].stabilizer_enabled).toBe(false);
    expect(FILTER_PRESETS["W3n"].limiter).toBe("hard");
    expect(FILTER_PRESETS["X3B"].stabilizer_enabled).toBe(true);
  });

  it("orders drop the limits they do not use", () => {
    expect(FILTER_PRESETS["X1A"].acceleration_limit).toBeUndefined();
    expect(FILTER_PRESETS["X1A"].jerk_limit).toBeUndefined();
    expect(FILTER_PRESETS["X2A"].jerk_limit).toBeUndefined();
    expect(FILTER_PRESETS["X2A"].acceleration_limit).toBe(100);
  });

  it("slider invariants hold for every preset", () => {
    for (const [name, p] of Object.entries(FILTER_PRESETS)) {
      expect(p.sigma, name).toBeGreaterThanOrEqual(0);
      expect(p.sigma, name).toBeLessThanOrEqual(1);
      expect(p.rho, name).toBeGreaterThanOrEqual(0);
      expect(p.rho, name).toBeLessThanOrEqual(1);
      expect(Number.isInteger(p.beta), name).toBe(true);
      expect(p.beta, name).toBeGreaterThanOrEqual(1);
      expect(p.p_min, name).toBeLessThan(p.p_max);
      expect(p.velocity_limit, name).toBeGreaterThan(0);
    }
  });
});
