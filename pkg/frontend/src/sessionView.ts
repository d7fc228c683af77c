// Server-confirmed session state.  The view renders only what the gateway
// reported: the cursor comes from cursor messages, never from local pose
// input, and every metric row is recomputed from wire values.

import type { Mode, ServerMessage } from "./protocol.js";
import { indexOfDifficulty, pathEfficiency, throughput } from "./metrics.js";

export type Phase = "idle" | "calibrating" | "calibrated" | "done";

export interface SignalPoint {
  t_ms: number;
  f1: number;
  f2: number;
}

export interface ResultRow {
  trial: number;
  d: number;
  w: number;
  mt_ms: number;
  p_px: number;
  success: boolean;
  id: number;
  pe: number | null; // null for an aborted trial with no usable path
  tp: number | null;
}

export interface TargetView {
  trial: number;
  cx: number;
  cy: number;
  w: number;
  d: number;
  startT: number;
}

export interface UiSessionView {
  phase: Phase;
  mode: Mode;
  cursor: { x: number; y: number; t_ms: number } | null;
  target: TargetView | null;
  thresholds: Record<string, number> | null;
  progress: Record<string, number> | null;
  dwellEnteredAt: number | null;
  dwellMs: number;
  signals: SignalPoint[];
  results: ResultRow[];
  lastError: string | null;
  lastSeq: number | null;
  droppedFrames: number;
}

const SIGNAL_HISTORY = 240; // 12 s at 20 Hz

export function initialView(dwellMs = 2000): UiSessionView {
  return {
    phase: "idle",
    mode: "joystick",
    cursor: null,
    target: null,
    thresholds: null,
    progress: null,
    dwellEnteredAt: null,
    dwellMs,
    signals: [],
    results: [],
    lastError: null,
    lastSeq: null,
    droppedFrames: 0,
  };
}

function insideTarget(target: TargetView, x: number, y: number): boolean {
  const half = target.w / 2;
  return Math.abs(x - target.cx) <= half && Math.abs(y - target.cy) <= half;
}

export function applyServerMessage(view: UiSessionView, msg: ServerMessage): UiSessionView {
  switch (msg.type) {
    case "frame": {
      if (view.lastSeq !== null && msg.seq !== view.lastSeq + 1) {
        view.droppedFrames += msg.seq - view.lastSeq - 1;
      }
      view.lastSeq = msg.seq;
      view.signals.push({ t_ms: msg.t_ms, f1: msg.f1, f2: msg.f2 });
      if (view.signals.length > SIGNAL_HISTORY) {
        view.signals.splice(0, view.signals.length - SIGNAL_HISTORY);
      }
      return view;
    }
    case "cursor": {
      view.cursor = { x: msg.x, y: msg.y, t_ms: msg.t_ms };
      if (view.target !== null) {
        if (insideTarget(view.target, msg.x, msg.y)) {
          if (view.dwellEnteredAt === null) view.dwellEnteredAt = msg.t_ms;
        } else {
          view.dwellEnteredAt = null;
        }
      }
      return view;
    }
    case "state": {
      view.phase = msg.phase;
      view.mode = msg.mode;
      if (msg.thresholds) view.thresholds = msg.thresholds;
      view.progress = msg.progress ?? null;
      if (msg.phase === "idle") {
        view.target = null;
        view.dwellEnteredAt = null;
      }
      if (msg.config && typeof msg.config.dwell_ms === "number") {
        view.dwellMs = msg.config.dwell_ms;
      }
      return view;
    }
    case "trial_start": {
      view.target = {
        trial: msg.trial,
        cx: msg.cx,
        cy: msg.cy,
        w: msg.w,
        d: msg.d,
        startT: msg.t_ms,
      };
      view.dwellEnteredAt = null;
      return view;
    }
    case "trial_result": {
      const target = view.target;
      const d = target?.d ?? NaN;
      const w = target?.w ?? NaN;
      const id = Number.isFinite(d) && Number.isFinite(w) ? indexOfDifficulty(d, w) : NaN;
      view.results.push({
        trial: msg.trial,
        d,
        w,
        mt_ms: msg.mt_ms,
        p_px: msg.p_px,
        success: msg.success,
        id,
        pe: msg.p_px > 0 ? pathEfficiency(d, msg.p_px) : null,
        tp: msg.mt_ms > 0 && Number.isFinite(id) ? throughput(id, msg.mt_ms) : null,
      });
      view.target = null;
      view.dwellEnteredAt = null;
      return view;
    }
    case "error": {
      view.lastError = msg.reason;
      return view;
    }
    case "hid":
      return view;
  }
}

/** Fraction of the dwell completed, for the progress ring. */
export function dwellFraction(view: UiSessionView): number {
  if (view.dwellEnteredAt === null || view.cursor === null) return 0;
  const held = view.cursor.t_ms - view.dwellEnteredAt;
  return Math.min(1, Math.max(0, held / view.dwellMs));
}

export function meanSummary(view: UiSessionView): { pe: number; tp: number; n: number } | null {
  const done = view.results.filter((r) => r.success && r.pe !== null && r.tp !== null);
  if (done.length === 0) return null;
  const pe = done.reduce((acc, r) => acc + (r.pe as number), 0) / done.length;
  const tp = done.reduce((acc, r) => acc + (r.tp as number), 0) / done.length;
  return { pe, tp, n: done.length };
}
