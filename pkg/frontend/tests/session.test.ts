import { describe, expect, it } from "vitest";
import { SessionClient } from "../src/session.js";
import { Transport, TransportEvents } from "../src/transport.js";

/** Scripted in-memory transport: the test plays the server role. */
class FakeTransport implements Transport {
  events: TransportEvents | null = null;
  sent: string[] = [];
  connectCalls = 0;

  connect(events: TransportEvents): void {
    this.events = events;
    this.connectCalls++;
  }
  open(): void {
    this.events!.onOpen();
  }
  send(line: string): void {
    this.sent.push(line);
  }
  deliver(obj: unknown): void {
    this.events!.onMessage(JSON.stringify(obj));
  }
  deliverRaw(line: string): void {
    this.events!.onMessage(line);
  }
  close(): void {
    this.events!.onClose();
  }
}

function frame(seq: number, over: Partial<Record<string, number>> = {}) {
  return {
    type: "frame", seq, t: seq / 60, s: 5, x: 5, v: 0, a: 0, j: 0, rev: 1,
    ...over,
  };
}

describe("SessionClient", () => {
  it("tracks connection status and applies presets on connect", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport);
    const statuses: string[] = [];
    client.onStatus((s) => statuses.push(s));
    client.connect();
    expect(statuses).toEqual(["connecting"]);
    transport.open();
    expect(client.status).toBe("connected");

    client.applyPreset("X3D");
    const msg = JSON.parse(transport.sent.at(-1)!);
    expect(msg).toEqual({ type: "preset", payload: { params: "X3D" } });
    expect(client.params!.sigma).toBe(0.95);
    expect(client.selectedPreset).toBe("X3D");
  });

  it("plots only received frames, verbatim", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport);
    client.connect();
    transport.open();
    const sent = frame(1, { x: 4.875, v: -7.5 });
    transport.deliver(sent);
    expect(client.frames.size).toBe(1);
    expect(client.frames.last()).toEqual(sent);
  });

  it("drops malformed frames and counts them", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport);
    client.connect();
    transport.open();
    transport.deliverRaw("{broken json");
    transport.deliver({ type: "frame", seq: 1 }); // missing fields
    transport.deliver(frame(2));
    expect(client.droppedMessages).toBe(2);
    expect(client.frames.size).toBe(1);
  });

  it("collects server error messages without dying", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport);
    client.connect();
    transport.open();
    transport.deliver({ type: "error", message: "unknown preset" });
    expect(client.serverErrors).toEqual(["unknown preset"]);
  });

  it("bounds the plot buffer to its capacity", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport, { bufferCapacity: 10 });
    client.connect();
    transport.open();
    for (let seq = 1; seq <= 100; seq++) transport.deliver(frame(seq));
    expect(client.frames.size).toBe(10);
    expect(client.frames.get(0)!.seq).toBe(91);
  });

  it("parameter edits update the mirror and send a set_params message", () => {
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport);
    client.connect();
    transport.open();
    client.applyPreset("X3A");
    client.setParams({ sigma: 0.5 });
    expect(client.params!.sigma).toBe(0.5);
    expect(client.selectedPreset).toBeNull(); // hand-tuned now
    const msg = JSON.parse(transport.sent.at(-1)!);
    expect(msg).toEqual({ type: "set_params", payload: { sigma: 0.5 } });
  });

  it("reconnects with backoff and replays the selection", () => {
    const scheduled: Array<{ fn: () => void; ms: number }> = [];
    let transport = new FakeTransport();
    const client = new SessionClient(() => transport, {
      schedule: (fn, ms) => scheduled.push({ fn, ms }),
      backoffMinMs: 100,
    });
    client.connect();
    transport.open();
    client.applyPreset("X3B");
    client.applyInput("phi_l");

    transport.close(); // server went away
    expect(client.status).toBe("disconnected");
    expect(scheduled.length).toBe(1);
    expect(scheduled[0].ms).toBe(100);

    // a retry that fails immediately grows the backoff ...
    transport = new FakeTransport();
    scheduled[0].fn();
    transport.close();
    expect(scheduled[1].ms).toBe(200);

    // ... and a successful retry resets it and replays the selection
    transport = new FakeTransport();
    scheduled[1].fn();
    transport.open();
    const replayed = transport.sent.map((l) => JSON.parse(l));
    expect(replayed).toContainEqual({ type: "preset", payload: { params: "X3B" } });
    expect(replayed).toContainEqual({
      type: "preset",
      payload: { input: "phi_l", seed: undefined },
    });
    transport.close();
    expect(scheduled[2].ms).toBe(100);
  });

  it("user disconnect does not auto-reconnect", () => {
    const scheduled: Array<() => void> = [];
    const transport = new FakeTransport();
    const client = new SessionClient(() => transport, {
      schedule: (fn) => scheduled.push(fn),
    });
    client.connect();
    transport.open();
    client.disconnect();
    expect(scheduled.length).toBe(0);
  });
});
