/**
 * Built-in filter parameter groups, mirroring the server's preset table so
 * the sliders can snap to a preset before the server acknowledges it.  The
 * server remains the motion authority; this table only drives the UI.
 */

export interface PresetParams {
  order: "C1" | "C2" | "C3";
  limiter: "tanh" | "hard";
  sigma: number;
  rho: number;
  beta: number;
  p_min: number;
  p_max: number;
  velocity_limit: number;
  acceleration_limit?: number;
  jerk_limit?: number;
  stabilizer_enabled: boolean;
}

const RANGE = { p_min: -10, p_max: 20, beta: 5 };
const SLOW = { velocity_limit: 20, acceleration_limit: 100, jerk_limit: 10000 };
const FAST = { velocity_limit: 90, acceleration_limit: 700, jerk_limit: 50000 };

interface GroupDef {
  character: { sigma: number; rho: number } | null; // null = stabilizer bypass
  limits: typeof SLOW;
  orders: number[];
}

const GROUPS: Record<string, GroupDef> = {
  W: { character: null, limits: SLOW, orders: [3] },
  A: { character: { sigma: 1.0, rho: 1.0 }, limits: SLOW, orders: [1, 2, 3] },
  B: { character: { sigma: 0.1, rho: 0.0 }, limits: SLOW, orders: [1, 2, 3] },
  C: { character: { sigma: 0.1, rho: 0.0 }, limits: FAST, orders: [1, 2, 3] },
  D: { character: { sigma: 0.95, rho: 1.0 }, limits: FAST, orders: [1, 2, 3] },
  E: { character: { sigma: 0.95, rho: 0.2 }, limits: FAST, orders: [3] },
};

function build(): Record<string, PresetParams> {
  const out: Record<string, PresetParams> = {};
  for (const [group, def] of Object.entries(GROUPS)) {
    const prefix = group === "W" ? "W" : "X";
    const tag = group === "W" ? "" : group;
    const character = def.character ?? { sigma: 0.0, rho: 0.0 };
    for (const order of def.orders) {
      const params: PresetParams = {
        order: `C${order}` as PresetParams["order"],
        limiter: "tanh",
        sigma: character.sigma,
        rho: character.rho,
        stabilizer_enabled: def.character !== null,
        ...RANGE,
        velocity_limit: def.limits.velocity_limit,
      };
      if (order >= 2) params.acceleration_limit = def.limits.acceleration_limit;
      if (order >= 3) params.jerk_limit = def.limits.jerk_limit;
      out[`${prefix}${order}${tag}`] = params;
    }
    // hard-limiter variants ship for the 3rd-order filters of W and A-D
    if (group !== "E") {
      out[`${prefix}3${tag}n`] = { ...out[`${prefix}3${tag}`], limiter: "hard" };
    }
  }
  return out;
}

export const FILTER_PRESETS: Record<string, PresetParams> = build();

export const INPUT_PRESETS = ["phi_l", "phi_r", "phi_c"] as const;

export function presetNames(): string[] {
  return Object.keys(FILTER_PRESETS).sort();
}
