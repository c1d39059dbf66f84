// Client-side session state machine. Frames in, view out; the DOM layer
// renders the view and calls the action methods. Every answer line the view
// shows corresponds to one received frame — nothing is fabricated here.

import { Mode, ServerFrame } from "./protocol.js";
import { ConnectionStatus, Transport, TransportEvents } from "./transport.js";

export type RunStatus = "idle" | "running" | "awaiting_choice" | "done";

export interface PendingChoice {
  requestId: number;
  alternatives: string[];
  origin: string;
  sent: boolean;    // true once a choice went out; buttons must disable
}

export interface SessionView {
  status: ConnectionStatus;
  items: string[];                 // pretty text of the loaded program items
  runStatus: RunStatus;
  pendingChoice: PendingChoice | null;
  answers: string[];               // one line per received answer frame
  verdict: string | null;          // "no." / "depth limit exceeded." / null
  log: string[];                   // trace and error lines
}

export class UiSession implements TransportEvents {
  private transport: Transport | null = null;
  private listeners: Array<() => void> = [];

  private status: ConnectionStatus = "connecting";
  private items: string[] = [];
  private runStatus: RunStatus = "idle";
  private pendingChoice: PendingChoice | null = null;
  private answers: string[] = [];
  private verdict: string | null = null;
  private log: string[] = [];

  attach(transport: Transport): void {
    this.transport = transport;
  }

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  view(): SessionView {
    return {
      status: this.status,
      items: [...this.items],
      runStatus: this.runStatus,
      pendingChoice: this.pendingChoice && { ...this.pendingChoice },
      answers: [...this.answers],
      verdict: this.verdict,
      log: [...this.log],
    };
  }

  // --- actions ---------------------------------------------------------

  load(source: string, origin?: string): void {
    this.send({ type: "load", source, origin });
  }

  query(goal: string, mode: Mode, trace = false): void {
    this.answers = [];
    this.verdict = null;
    this.pendingChoice = null;
    this.runStatus = "running";
    this.send({ type: "query", goal, mode, trace });
    this.notify();
  }

  /** Send the pending choice; at most once per request. */
  choose(index: number): void {
    const pending = this.pendingChoice;
    if (pending === null || pending.sent) return;
    if (index < 0 || index >= pending.alternatives.length) return;
    pending.sent = true;
    this.send({ type: "choice", request_id: pending.requestId, index });
    this.notify();
  }

  next(): void {
    if (this.runStatus !== "done") return;
    this.runStatus = "running";
    this.send({ type: "next" });
    this.notify();
  }

  stop(): void {
    if (this.runStatus === "idle") return;
    this.send({ type: "stop" });
  }

  close(): void {
    this.transport?.close();
  }

  // --- transport events ------------------------------------------------

  onStatus(status: ConnectionStatus): void {
    this.status = status;
    this.notify();
  }

  onFrame(frame: ServerFrame): void {
    switch (frame.type) {
      case "loaded":
        this.items = frame.items;
        this.log.push(`loaded ${frame.clause_count} item(s)`);
        break;
      case "choice_request":
        this.pendingChoice = {
          requestId: frame.request_id,
          alternatives: frame.alternatives,
          origin: frame.origin,
          sent: false,
        };
        this.runStatus = "awaiting_choice";
        break;
      case "answer":
        this.answers.push(frame.text);
        this.pendingChoice = null;
        this.runStatus = "done";
        break;
      case "failure":
        this.verdict = "no.";
        this.pendingChoice = null;
        this.runStatus = "idle";
        break;
      case "depth_exceeded":
        this.verdict = "depth limit exceeded.";
        this.pendingChoice = null;
        this.runStatus = "idle";
        break;
      case "trace":
        if (frame.event.kind === "stopped") {
          this.pendingChoice = null;
          this.runStatus = "idle";
          this.log.push("stopped");
        } else {
          this.log.push(`trace ${JSON.stringify(frame.event)}`);
        }
        break;
      case "error":
        this.log.push(`error ${frame.code}: ${frame.message}`);
        // A rejected query never starts; errors while a choice is pending
        // (stale id, bad index) leave the run and its request alive.
        if (this.runStatus === "running" && frame.code !== "busy") {
          this.runStatus = "idle";
        }
        break;
    }
    this.notify();
  }

  // --- internals ---------------------------------------------------------

  private send(message: Parameters<Transport["send"]>[0]): void {
    this.transport?.send(message);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }
}
