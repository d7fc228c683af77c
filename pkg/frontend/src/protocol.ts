// Wire protocol shared with the gateway: newline-delimited JSON objects,
// one per message, self-described by their `type` field.

export type Mode = "joystick" | "direct";

export interface PoseMsg {
  type: "pose";
  pitch_deg: number;
  yaw_deg: number;
}

export interface CalibrateMsg {
  type: "calibrate";
  mode: Mode;
}

export interface ConfigMsg {
  type: "config";
  mode?: Mode;
  screen?: { xaxis: number; yaxis: number };
  speed?: number;
  calib_duration_ms?: number;
  dwell_ms?: number;
  trial_count?: number;
  seed?: number;
}

export type ClientMessage = PoseMsg | CalibrateMsg | ConfigMsg;

export interface FrameMsg {
  type: "frame";
  t_ms: number;
  seq: number;
  s1: number;
  s2: number;
  f1: number;
  f2: number;
}

export interface CursorMsg {
  type: "cursor";
  t_ms: number;
  seq: number;
  x: number;
  y: number;
}

export interface HidMsg {
  type: "hid";
  t_ms: number;
  report_hex: string;
}

export interface StateMsg {
  type: "state";
  phase: "idle" | "calibrating" | "calibrated" | "done";
  mode: Mode;
  thresholds?: Record<string, number>;
  progress?: Record<string, number>;
  config?: Record<string, unknown>;
}

export interface TrialStartMsg {
  type: "trial_start";
  t_ms: number;
  trial: number;
  cx: number;
  cy: number;
  w: number;
  d: number;
}

export interface TrialResultMsg {
  type: "trial_result";
  t_ms: number;
  trial: number;
  mt_ms: number;
  p_px: number;
  success: boolean;
}

export interface ErrorMsg {
  type: "error";
  reason: string;
}

export type ServerMessage =
  | FrameMsg
  | CursorMsg
  | HidMsg
  | StateMsg
  | TrialStartMsg
  | TrialResultMsg
  | ErrorMsg;

const SERVER_TYPES = new Set([
  "frame",
  "cursor",
  "hid",
  "state",
  "trial_start",
  "trial_result",
  "error",
]);

const REQUIRED_NUMBERS: Record<string, string[]> = {
  frame: ["t_ms", "seq", "s1", "s2", "f1", "f2"],
  cursor: ["t_ms", "seq", "x", "y"],
  hid: ["t_ms"],
  trial_start: ["t_ms", "trial", "cx", "cy", "w", "d"],
  trial_result: ["t_ms", "trial", "mt_ms", "p_px"],
  state: [],
  error: [],
};

export function parseServerMessage(line: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new Error(`not JSON: ${line.slice(0, 80)}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("message must be an object");
  }
  const msg = raw as Record<string, unknown>;
  const type = msg.type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${String(type)}`);
  }
  for (const field of REQUIRED_NUMBERS[type] ?? []) {
    if (typeof msg[field] !== "number" || !Number.isFinite(msg[field] as number)) {
      throw new Error(`${type}: missing numeric field ${field}`);
    }
  }
  if (type === "state" && typeof msg.phase !== "string") {
    throw new Error("state: missing phase");
  }
  if (type === "error" && typeof msg.reason !== "string") {
    throw new Error("error: missing reason");
  }
  return msg as unknown as ServerMessage;
}

export function serializeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}
