/**
 * Live-session wire protocol: newline-delimited JSON, one object per line.
 * The same schema travels over a raw TCP socket or a WebSocket bridge
 * (one object per WebSocket message).
 */

export interface FrameMessage {
  type: "frame";
  /** Tick index; strictly increasing within a session. */
  seq: number;
  /** Tick time = seq * dt; wall-clock pacing never skews it. */
  t: number;
  /** Current set-point (for plotting the commanded trajectory). */
  s: number;
  x: number;
  v: number;
  a: number;
  j: number;
  /** Count of inbound messages the server has applied so far. */
  rev: number;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = FrameMessage | ErrorMessage;

export interface FilterParamsPatch {
  order?: "C1" | "C2" | "C3";
  limiter?: "tanh" | "hard";
  sigma?: number;
  rho?: number;
  beta?: number;
  p_min?: number;
  p_max?: number;
  velocity_limit?: number;
  acceleration_limit?: number;
  jerk_limit?: number;
  stabilizer_enabled?: boolean;
}

export type ClientMessage =
  | { type: "set_params"; payload: FilterParamsPatch | string }
  | { type: "set_point"; payload: { value: number } }
  | {
      type: "preset";
      payload: { params?: string; input?: string; seed?: number };
    }
  | { type: "reset"; payload: { x?: number } };

export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify(msg) + "\n";
}

/** Parse one line; returns null for anything malformed or unknown. */
export function decodeServerMessage(line: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const m = obj as Record<string, unknown>;
  if (m.type === "error" && typeof m.message === "string") {
    return { type: "error", message: m.message };
  }
  if (m.type === "frame") {
    const required = ["seq", "t", "s", "x", "v", "a", "j", "rev"];
    for (const key of required) {
      if (typeof m[key] !== "number" || !Number.isFinite(m[key] as number)) {
        return null;
      }
    }
    return m as unknown as FrameMessage;
  }
  return null;
}

/** Incremental splitter for newline-delimited streams. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines.filter((l) => l.trim().length > 0);
  }
}
