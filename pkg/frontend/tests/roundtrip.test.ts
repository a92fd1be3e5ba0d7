/**
 * End-to-end acceptance against the real server:
 *
 * 1. Round trip: applying preset X3D and streaming the jump input reproduces,
 *    in the received frames, the same overshoot metric as a batch CLI run to
 *    within 1e-9 (the server computes all motion; this client only reads).
 * 2. Latency contract: a set_params message takes effect no later than the
 *    next received frame, asserted via frame sequence numbers and the
 *    server's applied-revision counter.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { connect, Socket } from "node:net";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { LineSplitter, decodeServerMessage, encodeMessage, FrameMessage, ClientMessage } from "../src/protocol.js";
import { overshootFraction, parseOutputCsv, MotionSample } from "../src/metrics.js";

const PYTHON = process.env.KINEMA_PYTHON ?? "python3";
const REPO_ROOT = join(__dirname, "..", "..");

/** Raw TCP transport for tests: same protocol the WebSocket bridge carries. */
class TcpClient {
  private socket: Socket;
  private splitter = new LineSplitter();
  private queue: FrameMessage[] = [];
  private waiters: Array<(f: FrameMessage) => void> = [];

  private constructor(socket: Socket) {
    this.socket = socket;
    socket.on("data", (chunk) => {
      for (const line of this.splitter.push(chunk.toString("utf-8"))) {
        const msg = decodeServerMessage(line);
        if (msg && msg.type === "frame") {
          const waiter = this.waiters.shift();
          if (waiter) waiter(msg);
          else this.queue.push(msg);
        }
      }
    });
  }

  static async open(port: number): Promise<TcpClient> {
    for (let attempt = 0; attempt < 100; attempt++) {
      try {
        const socket = await new Promise<Socket>((resolve, reject) => {
          const s = connect({ host: "127.0.0.1", port }, () => resolve(s));
          s.on("error", reject);
        });
        socket.removeAllListeners("error");
        socket.on("error", () => undefined);
        return new TcpClient(socket);
      } catch {
        await new Promise((r) => setTimeout(r, 100));
      }
    }
    throw new Error(`server on port ${port} never came up`);
  }

  send(msg: ClientMessage): void {
    this.socket.write(encodeMessage(msg));
  }

  nextFrame(timeoutMs = 10_000): Promise<FrameMessage> {
    const queued = this.queue.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for a frame")),
        timeoutMs,
      );
      this.waiters.push((f) => {
        clearTimeout(timer);
        resolve(f);
      });
    });
  }

  async collect(n: number): Promise<FrameMessage[]> {
    const out: FrameMessage[] = [];
    while (out.length < n) out.push(await this.nextFrame());
    return out;
  }

  close(): void {
    this.socket.destroy();
  }
}

describe("live session against the real server", () => {
  let server: ChildProcess;
  let port: number;
  let workDir: string;

  beforeAll(async () => {
    workDir = mkdtempSync(join(tmpdir(), "kinema-ui-"));
    port = 7000 + Math.floor(Math.random() * 20000);
    server = spawn(
      PYTHON,
      ["-m", "kinema.cli", "serve", "--port", String(port), "--rate", "60", "--turbo"],
      { cwd: REPO_ROOT, stdio: ["ignore", "ignore", "pipe"] },
    );
    server.stderr!.on("data", () => undefined);
  }, 30_000);

  afterAll(() => {
    server?.kill();
    rmSync(workDir, { recursive: true, force: true });
  });

  it("reproduces the CLI overshoot metric from streamed frames within 1e-9", async () => {
    const csvPath = join(workDir, "cli.csv");
    const cli = spawnSync(
      PYTHON,
      ["-m", "kinema.cli", "filter", "--params", "X3D", "--input", "phi_l",
       "--duration", "10", "--out", csvPath],
      { cwd: REPO_ROOT },
    );
    expect(cli.status).toBe(0);
    const cliRows = parseOutputCsv(readFileSync(csvPath, "utf-8"));
    expect(cliRows.length).toBe(600);
    const cliOvershoot = overshootFraction(cliRows, 5, -5, 2.5, 7.5);

    const client = await TcpClient.open(port);
    client.send({ type: "preset", payload: { params: "X3D", input: "phi_l" } });
    const frames = await client.collect(600);
    client.close();

    expect(frames[0].seq).toBe(1);
    expect(frames[0].x).toBe(5.0);
    const samples: MotionSample[] = frames.map((f) => ({
      t: f.t, x: f.x, v: f.v, a: f.a, j: f.j,
    }));
    const uiOvershoot = overshootFraction(samples, 5, -5, 2.5, 7.5);
    expect(Math.abs(uiOvershoot - cliOvershoot)).toBeLessThanOrEqual(1e-9);

    // stronger: the streamed motion equals the batch motion bit for bit
    for (let i = 0; i < 600; i++) {
      expect(frames[i].x).toBe(cliRows[i].x);
      expect(frames[i].v).toBe(cliRows[i].v);
    }
  }, 60_000);

  it("set_params takes effect no later than the next received frame", async () => {
    const client = await TcpClient.open(port);
    client.send({ type: "preset", payload: { params: "X3A", input: "phi_l" } });
    const first = await client.nextFrame();
    const rev0 = first.rev;

    client.send({ type: "set_params", payload: { sigma: 0.5, rho: 0.9 } });
    let prev = first;
    let bumped: FrameMessage | null = null;
    for (let i = 0; i < 5000; i++) {
      const frame = await client.nextFrame();
      expect(frame.seq).toBe(prev.seq + 1); // no gaps in the stream
      if (frame.rev > rev0) {
        bumped = frame;
        break;
      }
      prev = frame;
    }
    client.close();

    expect(bumped).not.toBeNull();
    // the revision bump appears on the very next frame after the server
    // applied the message: no frame with the old revision follows it
    expect(bumped!.seq).toBe(prev.seq + 1);
    expect(bumped!.rev).toBe(rev0 + 1);
  }, 60_000);

  it("two sessions with different seeds stream independent trajectories", async () => {
    const a = await TcpClient.open(port);
    const b = await TcpClient.open(port);
    a.send({ type: "preset", payload: { params: "X3B", input: "phi_r", seed: 1 } });
    b.send({ type: "preset", payload: { params: "X3B", input: "phi_r", seed: 2 } });
    const fa = await a.collect(120);
    const fb = await b.collect(120);
    a.close();
    b.close();
    expect(fa.map((f) => f.x)).not.toEqual(fb.map((f) => f.x));
  }, 60_000);
});
