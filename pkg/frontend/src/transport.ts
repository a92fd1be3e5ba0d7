/**
 * Message transports: the session client only sees this interface, so the
 * browser build uses a WebSocket while tests drive the client over a raw TCP
 * socket or a scripted fake.
 */

export interface TransportEvents {
  onMessage: (line: string) => void;
  onOpen: () => void;
  onClose: () => void;
}

export interface Transport {
  connect(events: TransportEvents): void;
  send(line: string): void;
  close(): void;
}

/** Browser transport: one protocol line per WebSocket text message. */
export class WebSocketTransport implements Transport {
  private socket: WebSocket | null = null;

  constructor(private readonly url: string) {}

  connect(events: TransportEvents): void {
    const socket = new WebSocket(this.url);
    this.socket = socket;
    socket.onopen = () => events.onOpen();
    socket.onmessage = (event) => {
      if (typeof event.data === "string") {
        for (const line of event.data.split("\n")) {
          if (line.trim()) events.onMessage(line);
        }
      }
    };
    socket.onclose = () => events.onClose();
    socket.onerror = () => {
      // onclose fires afterwards; nothing else to do
    };
  }

  send(line: string): void {
    if (this.socket && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(line);
    }
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
