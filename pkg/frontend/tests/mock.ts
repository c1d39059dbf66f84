import { ClientMessage, ServerFrame } from "../src/protocol.js";
import { Transport, TransportEvents } from "../src/transport.js";

/** Scripted transport: records outgoing messages, replays server frames. */
export class MockTransport implements Transport {
  sent: ClientMessage[] = [];
  closed = false;

  constructor(private readonly events: TransportEvents) {}

  send(message: ClientMessage): void {
    this.sent.push(message);
  }

  close(): void {
    this.closed = true;
  }

  open(): void {
    this.events.onStatus("open");
  }

  reply(frame: ServerFrame): void {
    this.events.onFrame(frame);
  }

  sentOfType(type: ClientMessage["type"]): ClientMessage[] {
    return this.sent.filter((m) => m.type === type);
  }
}
