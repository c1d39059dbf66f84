// Transports carry ClientMessages out and ServerFrames in. The browser uses
// the WebSocket one; tests drive sessions through scripted or subprocess
// transports implementing the same interface.

import { ClientMessage, ServerFrame, parseFrame } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface Transport {
  send(message: ClientMessage): void;
  close(): void;
}

export interface TransportEvents {
  onFrame(frame: ServerFrame): void;
  onStatus(status: ConnectionStatus): void;
}

/** Live session over a WebSocket (the engine serves it at /ws). */
export function connect(url: string, events: TransportEvents): Transport {
  const socket = new WebSocket(url);
  events.onStatus("connecting");
  socket.onopen = () => events.onStatus("open");
  socket.onclose = () => events.onStatus("closed");
  socket.onmessage = (event: MessageEvent) => {
    const frame = parseFrame(String(event.data));
    if (frame !== null) events.onFrame(frame);
  };
  return {
    send(message: ClientMessage): void {
      if (socket.readyState === WebSocket.OPEN) {
        socket.send(JSON.stringify(message));
      }
    },
    close(): void {
      socket.close();
    },
  };
}
