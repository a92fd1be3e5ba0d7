/**
 * Session client: owns the connection lifecycle, mirrors the last sent
 * parameters, buffers the rolling plot window, and counts protocol errors.
 * It never computes or alters motion values; every plotted sample is a
 * received frame verbatim.
 */

import {
  ClientMessage,
  decodeServerMessage,
  encodeMessage,
  FilterParamsPatch,
  FrameMessage,
} from "./protocol.js";
import { RingBuffer } from "./ringBuffer.js";
import { FILTER_PRESETS, PresetParams } from "./presets.js";
import { Transport, TransportEvents } from "./transport.js";

export type ConnectionStatus = "disconnected" | "connecting" | "connected";

export interface SessionOptions {
  /** Plot window length in frames (default: 10 s at 60 Hz). */
  bufferCapacity?: number;
  /** Reconnect backoff start/ceiling in ms. */
  backoffMinMs?: number;
  backoffMaxMs?: number;
  /** Injected for tests; defaults to setTimeout. */
  schedule?: (fn: () => void, ms: number) => void;
}

export class SessionClient {
  status: ConnectionStatus = "disconnected";
  /** Mirror of the last parameters sent (optimistic; server clamps). */
  params: PresetParams | null = null;
  selectedPreset: string | null = null;
  selectedInput: string | null = null;
  frames: RingBuffer<FrameMessage>;
  droppedMessages = 0;
  serverErrors: string[] = [];
  lastFrame: FrameMessage | null = null;

  private transport: Transport | null = null;
  private backoffMs: number;
  private readonly backoffMinMs: number;
  private readonly backoffMaxMs: number;
  private readonly schedule: (fn: () => void, ms: number) => void;
  private closedByUser = false;
  private listeners: Array<(frame: FrameMessage) => void> = [];
  private statusListeners: Array<(status: ConnectionStatus) => void> = [];

  constructor(
    private readonly makeTransport: () => Transport,
    options: SessionOptions = {},
  ) {
    this.frames = new RingBuffer(options.bufferCapacity ?? 600);
    this.backoffMinMs = options.backoffMinMs ?? 250;
    this.backoffMaxMs = options.backoffMaxMs ?? 5000;
    this.backoffMs = this.backoffMinMs;
    this.schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
  }

  onFrame(listener: (frame: FrameMessage) => void): void {
    this.listeners.push(listener);
  }

  onStatus(listener: (status: ConnectionStatus) => void): void {
    this.statusListeners.push(listener);
  }

  connect(): void {
    this.closedByUser = false;
    this.setStatus("connecting");
    const transport = this.makeTransport();
    this.transport = transport;
    const events: TransportEvents = {
      onOpen: () => {
        this.backoffMs = this.backoffMinMs;
        this.setStatus("connected");
        this.resendConfiguration();
      },
      onMessage: (line) => this.handleLine(line),
      onClose: () => {
        this.setStatus("disconnected");
        this.transport = null;
        if (!this.closedByUser) this.scheduleReconnect();
      },
    };
    transport.connect(events);
  }

  disconnect(): void {
    this.closedByUser = true;
    this.transport?.close();
    this.transport = null;
    this.setStatus("disconnected");
  }

  applyPreset(name: string): void {
    const preset = FILTER_PRESETS[name];
    if (!preset) throw new Error(`unknown preset ${name}`);
    this.params = { ...preset };
    this.selectedPreset = name;
    this.send({ type: "preset", payload: { params: name } });
  }

  applyInput(name: string, seed?: number): void {
    this.selectedInput = name;
    this.send({ type: "preset", payload: { input: name, seed } });
  }

  setParams(patch: FilterParamsPatch): void {
    if (this.params) {
      this.params = { ...this.params, ...patch } as PresetParams;
      this.selectedPreset = null;
    }
    this.send({ type: "set_params", payload: patch });
  }

  setPoint(value: number): void {
    this.send({ type: "set_point", payload: { value } });
  }

  reset(x?: number): void {
    this.send({ type: "reset", payload: x === undefined ? {} : { x } });
  }

  send(msg: ClientMessage): void {
    this.transport?.send(encodeMessage(msg));
  }

  private resendConfiguration(): void {
    // after a reconnect the server session is fresh; replay the selection
    if (this.selectedPreset) {
      this.send({ type: "preset", payload: { params: this.selectedPreset } });
    } else if (this.params) {
      this.send({ type: "set_params", payload: this.params });
    }
    if (this.selectedInput) {
      this.send({ type: "preset", payload: { input: this.selectedInput } });
    }
  }

  private handleLine(line: string): void {
    const msg = decodeServerMessage(line);
    if (msg === null) {
      this.droppedMessages++;
      return;
    }
    if (msg.type === "error") {
      this.serverErrors.push(msg.message);
      if (this.serverErrors.length > 50) this.serverErrors.shift();
      return;
    }
    this.frames.push(msg);
    this.lastFrame = msg;
    for (const listener of this.listeners) listener(msg);
  }

  private scheduleReconnect(): void {
    const delay = this.backoffMs;
    this.backoffMs = Math.min(this.backoffMs * 2, this.backoffMaxMs);
    this.schedule(() => {
      if (!this.closedByUser) this.connect();
    }, delay);
  }

  private setStatus(status: ConnectionStatus): void {
    this.status = status;
    for (const listener of this.statusListeners) listener(status);
  }
}
