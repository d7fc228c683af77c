// Virtual head pose driven by arrow keys and sliders.
//
// Arrow keys ramp the commanded pitch/yaw at a fixed rate; releasing them
// (with auto-center on) decays the pose back to rest so the joystick dead
// zone is reachable.  Sliders set the pose absolutely and win over keys.

export const PITCH_LIMIT = 45;
export const YAW_LIMIT = 60;

export interface PoseCommand {
  pitch_deg: number;
  yaw_deg: number;
}

export interface PoseInputState {
  pitch: number;
  yaw: number;
  held: Set<string>;
  slider: { pitch: number; yaw: number } | null;
  rateDegPerSec: number;
  autoCenter: boolean;
}

export function createPoseInput(rateDegPerSec = 20, autoCenter = true): PoseInputState {
  return {
    pitch: 0,
    yaw: 0,
    held: new Set(),
    slider: null,
    rateDegPerSec,
    autoCenter,
  };
}

const KEYS = new Set(["ArrowUp", "ArrowDown", "ArrowLeft", "ArrowRight"]);

export function keyDown(state: PoseInputState, key: string): void {
  if (KEYS.has(key)) {
    state.held.add(key);
    state.slider = null; // keys take the wheel back from the sliders
  }
}

export function keyUp(state: PoseInputState, key: string): void {
  state.held.delete(key);
}

export function setSliders(state: PoseInputState, pitch: number, yaw: number): void {
  state.slider = { pitch: clamp(pitch, PITCH_LIMIT), yaw: clamp(yaw, YAW_LIMIT) };
  state.held.clear();
}

function clamp(v: number, limit: number): number {
  return Math.min(Math.max(v, -limit), limit);
}

function decay(value: number, step: number): number {
  if (Math.abs(value) <= step) return 0;
  return value - Math.sign(value) * step;
}

/** Advance one tick of dt milliseconds and return the pose to send. */
export function tick(state: PoseInputState, dtMs: number): PoseCommand {
  if (state.slider !== null) {
    state.pitch = state.slider.pitch;
    state.yaw = state.slider.yaw;
    return { pitch_deg: state.pitch, yaw_deg: state.yaw };
  }
  const step = (state.rateDegPerSec * dtMs) / 1000;
  // ArrowUp tilts the head up: pitch decreases (tilt-down is positive).
  const pitchDir = (state.held.has("ArrowDown") ? 1 : 0) - (state.held.has("ArrowUp") ? 1 : 0);
  const yawDir = (state.held.has("ArrowRight") ? 1 : 0) - (state.held.has("ArrowLeft") ? 1 : 0);
  if (pitchDir !== 0) {
    state.pitch = clamp(state.pitch + pitchDir * step, PITCH_LIMIT);
  } else if (state.autoCenter) {
    state.pitch = decay(state.pitch, step);
  }
  if (yawDir !== 0) {
    state.yaw = clamp(state.yaw + yawDir * step, YAW_LIMIT);
  } else if (state.autoCenter) {
    state.yaw = decay(state.yaw, step);
  }
  return { pitch_deg: state.pitch, yaw_deg: state.yaw };
}
