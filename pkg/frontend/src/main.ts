/**
 * App entry: wires the session client, parameter controls and plots into the
 * page.  The server owns all motion state; reloading the page only loses the
 * preset selection.
 */

import { SessionClient } from "./session.js";
import { WebSocketTransport } from "./transport.js";
import { MotionPlots } from "./plots.js";
import { FILTER_PRESETS, INPUT_PRESETS, presetNames } from "./presets.js";
import { FilterParamsPatch } from "./protocol.js";

const RATE = 60;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function wsUrl(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/session?rate=${RATE}`;
}

function main(): void {
  const client = new SessionClient(() => new WebSocketTransport(wsUrl()), {
    bufferCapacity: RATE * 10,
  });

  const statusEl = el<HTMLSpanElement>("status");
  const errorsEl = el<HTMLSpanElement>("errors");
  client.onStatus((status) => {
    statusEl.textContent = status;
    statusEl.className = `status ${status}`;
  });

  // preset selectors ---------------------------------------------------
  const presetSelect = el<HTMLSelectElement>("preset");
  for (const name of presetNames()) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    presetSelect.appendChild(option);
  }
  const inputSelect = el<HTMLSelectElement>("input-preset");
  for (const name of INPUT_PRESETS) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    inputSelect.appendChild(option);
  }

  // sliders -------------------------------------------------------------
  interface SliderSpec {
    id: string;
    key: keyof FilterParamsPatch;
    parse: (v: string) => number;
  }
  const sliders: SliderSpec[] = [
    { id: "sigma", key: "sigma", parse: parseFloat },
    { id: "rho", key: "rho", parse: parseFloat },
    { id: "beta", key: "beta", parse: (v) => Math.round(parseFloat(v)) },
    { id: "velocity", key: "velocity_limit", parse: parseFloat },
    { id: "acceleration", key: "acceleration_limit", parse: parseFloat },
    { id: "jerk", key: "jerk_limit", parse: parseFloat },
  ];

  const refreshSliders = () => {
    const p = client.params;
    if (!p) return;
    for (const spec of sliders) {
      const input = el<HTMLInputElement>(spec.id);
      const value = (p as unknown as Record<string, number | undefined>)[
        spec.key
      ];
      if (value !== undefined) input.value = String(value);
      el<HTMLSpanElement>(`${spec.id}-value`).textContent =
        value === undefined ? "—" : String(value);
    }
    el<HTMLSelectElement>("order").value = p.order;
    el<HTMLSelectElement>("limiter").value = p.limiter;
  };

  for (const spec of sliders) {
    const input = el<HTMLInputElement>(spec.id);
    input.addEventListener("change", () => {
      const value = spec.parse(input.value);
      el<HTMLSpanElement>(`${spec.id}-value`).textContent = String(value);
      client.setParams({ [spec.key]: value } as FilterParamsPatch);
    });
  }
  el<HTMLSelectElement>("order").addEventListener("change", (e) => {
    client.setParams({ order: (e.target as HTMLSelectElement).value as never });
  });
  el<HTMLSelectElement>("limiter").addEventListener("change", (e) => {
    client.setParams({ limiter: (e.target as HTMLSelectElement).value as never });
  });

  presetSelect.addEventListener("change", () => {
    client.applyPreset(presetSelect.value);
    refreshSliders();
  });
  inputSelect.addEventListener("change", () => {
    client.applyInput(inputSelect.value, 0);
  });
  el<HTMLButtonElement>("reset").addEventListener("click", () => client.reset());

  // plots + drag-to-command ----------------------------------------------
  const canvases = ["plot-x", "plot-v", "plot-a", "plot-j"].map((id) =>
    el<HTMLCanvasElement>(id),
  );
  const plots = new MotionPlots(canvases);

  let dragging = false;
  let pendingSetPoint: number | null = null;
  const positionCanvas = canvases[0];
  const pointerToValue = (event: PointerEvent) => {
    const rect = positionCanvas.getBoundingClientRect();
    const y = ((event.clientY - rect.top) / rect.height) * positionCanvas.height;
    return client.params ? plots.positionFromPointer(y, client.params) : null;
  };
  positionCanvas.addEventListener("pointerdown", (event) => {
    dragging = true;
    positionCanvas.setPointerCapture(event.pointerId);
    pendingSetPoint = pointerToValue(event);
  });
  positionCanvas.addEventListener("pointermove", (event) => {
    if (dragging) pendingSetPoint = pointerToValue(event);
  });
  positionCanvas.addEventListener("pointerup", () => {
    dragging = false;
  });

  const renderLoop = () => {
    // at most one set-point message per animation frame
    if (pendingSetPoint !== null) {
      client.setPoint(pendingSetPoint);
      pendingSetPoint = null;
    }
    plots.render(client.frames, client.params);
    errorsEl.textContent = String(client.droppedMessages + client.serverErrors.length);
    requestAnimationFrame(renderLoop);
  };
  requestAnimationFrame(renderLoop);

  client.connect();
  // a sensible opening scene: fast & smooth filter chasing the jump input
  client.onStatus((status) => {
    if (status === "connected" && !client.selectedPreset) {
      client.applyPreset("X3D");
      client.applyInput("phi_l");
      refreshSliders();
    }
  });
}

main();
