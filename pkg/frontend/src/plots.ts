/**
 * Stacked canvas panels for the four motion traces.  Each derivative panel
 * autoscales but pins a shaded band at +/- its configured limit, so limit
 * proximity is visible at a glance; the position panel additionally draws
 * the set-point trace and the position range.
 */

import { FrameMessage } from "./protocol.js";
import { RingBuffer } from "./ringBuffer.js";
import { PresetParams } from "./presets.js";

interface PanelSpec {
  label: string;
  pick: (f: FrameMessage) => number;
  limit: (p: PresetParams) => number | undefined;
  color: string;
}

const PANELS: PanelSpec[] = [
  { label: "position", pick: (f) => f.x, limit: () => undefined, color: "#4fc3f7" },
  { label: "velocity", pick: (f) => f.v, limit: (p) => p.velocity_limit, color: "#aed581" },
  { label: "acceleration", pick: (f) => f.a, limit: (p) => p.acceleration_limit, color: "#ffb74d" },
  { label: "jerk", pick: (f) => f.j, limit: (p) => p.jerk_limit, color: "#e57373" },
];

export class MotionPlots {
  private contexts: CanvasRenderingContext2D[] = [];

  constructor(private readonly canvases: HTMLCanvasElement[]) {
    if (canvases.length !== PANELS.length) {
      throw new Error(`expected ${PANELS.length} canvases`);
    }
    this.contexts = canvases.map((c) => {
      const ctx = c.getContext("2d");
      if (!ctx) throw new Error("2d canvas context unavailable");
      return ctx;
    });
  }

  render(frames: RingBuffer<FrameMessage>, params: PresetParams | null): void {
    const data = frames.toArray();
    PANELS.forEach((panel, i) => {
      this.renderPanel(this.contexts[i], this.canvases[i], panel, data, params);
    });
  }

  private renderPanel(
    ctx: CanvasRenderingContext2D,
    canvas: HTMLCanvasElement,
    panel: PanelSpec,
    data: FrameMessage[],
    params: PresetParams | null,
  ): void {
    const { width, height } = canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#161b22";
    ctx.fillRect(0, 0, width, height);

    const limit = params ? panel.limit(params) : undefined;
    let lo = Infinity;
    let hi = -Infinity;
    for (const f of data) {
      const value = panel.pick(f);
      lo = Math.min(lo, value);
      hi = Math.max(hi, value);
      if (panel.label === "position") {
        lo = Math.min(lo, f.s);
        hi = Math.max(hi, f.s);
      }
    }
    if (limit !== undefined) {
      lo = Math.min(lo, -limit);
      hi = Math.max(hi, limit);
    }
    if (panel.label === "position" && params) {
      lo = Math.min(lo, params.p_min);
      hi = Math.max(hi, params.p_max);
    }
    if (!Number.isFinite(lo) || lo === hi) {
      lo = -1;
      hi = 1;
    }
    const pad = 0.08 * (hi - lo);
    lo -= pad;
    hi += pad;
    const yOf = (value: number) => height - ((value - lo) / (hi - lo)) * height;

    // limit band / range guides
    ctx.fillStyle = "rgba(229, 115, 115, 0.12)";
    if (limit !== undefined) {
      ctx.fillRect(0, 0, width, yOf(limit));
      ctx.fillRect(0, yOf(-limit), width, height - yOf(-limit));
    } else if (panel.label === "position" && params) {
      ctx.fillRect(0, 0, width, yOf(params.p_max));
      ctx.fillRect(0, yOf(params.p_min), width, height - yOf(params.p_min));
    }
    ctx.strokeStyle = "rgba(255,255,255,0.25)";
    ctx.beginPath();
    ctx.moveTo(0, yOf(0));
    ctx.lineTo(width, yOf(0));
    ctx.stroke();

    if (data.length >= 2) {
      const xOf = (i: number) => (i / (data.length - 1)) * width;
      if (panel.label === "position") {
        ctx.strokeStyle = "rgba(255,255,255,0.5)";
        ctx.setLineDash([4, 3]);
        ctx.beginPath();
        data.forEach((f, i) => {
          const px = xOf(i);
          const py = yOf(f.s);
          if (i === 0) ctx.moveTo(px, py);
          else ctx.lineTo(px, py);
        });
        ctx.stroke();
        ctx.setLineDash([]);
      }
      ctx.strokeStyle = panel.color;
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      data.forEach((f, i) => {
        const px = xOf(i);
        const py = yOf(panel.pick(f));
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.stroke();
      ctx.lineWidth = 1;
    }

    ctx.fillStyle = "rgba(255,255,255,0.7)";
    ctx.font = "11px system-ui, sans-serif";
    const latest = data.length ? panel.pick(data[data.length - 1]) : 0;
    ctx.fillText(`${panel.label}  ${latest.toFixed(3)}`, 8, 14);
    if (limit !== undefined) {
      ctx.fillText(`±${limit}`, width - 52, 14);
    }
  }

  /** Map a pointer y inside the position panel to a set-point value. */
  positionFromPointer(y: number, params: PresetParams): number {
    const canvas = this.canvases[0];
    const frac = 1 - Math.min(Math.max(y / canvas.height, 0), 1);
    return params.p_min + frac * (params.p_max - params.p_min);
  }
}
