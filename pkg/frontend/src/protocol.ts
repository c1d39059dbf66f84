// Message schema for the engine's session protocol (docs/protocol.md in the
// repository root). One JSON object per WebSocket text frame or stdio line.

export type Mode = "pv" | "ex";

export type ClientMessage =
  | { type: "load"; source: string; origin?: string }
  | { type: "query"; goal: string; mode: Mode; depth?: number;
      occurs_check?: boolean; trace?: boolean }
  | { type: "choice"; request_id: number; index: number }
  | { type: "next" }
  | { type: "stop" };

export interface LoadedFrame {
  type: "loaded";
  clause_count: number;
  items: string[];
}

export interface ChoiceRequestFrame {
  type: "choice_request";
  request_id: number;     // unique per session
  alternatives: string[];   // pretty clause per leaf; index is the position
  origin: string;           // file:line of the choice item
}

export interface AnswerFrame {
  type: "answer";
  bindings: Record<string, string>;
  text: string;             // "X = a, Y = b", or "yes"
}

export interface TraceFrame {
  type: "trace";
  event: { kind: string } & Record<string, unknown>;
}

export interface ErrorFrame {
  type: "error";
  code: string;
  message: string;
}

export type ServerFrame =
  | LoadedFrame
  | ChoiceRequestFrame
  | AnswerFrame
  | { type: "failure" }
  | { type: "depth_exceeded" }
  | TraceFrame
  | ErrorFrame;

const FRAME_TYPES = new Set([
  "loaded", "choice_request", "answer", "failure", "depth_exceeded",
  "trace", "error",
]);

/** Parse one wire line/frame; null for anything that is not a server frame. */
export function parseFrame(text: string): ServerFrame | null {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) return null;
  const type = (value as { type?: unknown }).type;
  if (typeof type !== "string" || !FRAME_TYPES.has(type)) return null;
  return value as ServerFrame;
}
