"""Deterministic closed-loop user model for headless runs.

The scripted user stands in for a volunteer: it watches the cursor and
target through a reaction delay, commands head poses toward the target,
and adds Gaussian tremor to every commanded pose.  It is a test
instrument, not a model of a human.

Joystick strategy: pick one axis at a time and hold the matching pose
primitive until the cursor is within a stop radius of the target
center, then release and let the filtered signal glide back into the
dead zone.  The stop radius anticipates that glide; if the cursor
parks outside the target anyway, the radius is halved until motion
resumes.

Direct-mapping strategy: run the four-extreme calibration sweep, then
acquire targets with move-and-wait submovements: command a pose step,
hold while the moving-average settles, re-measure, and size the next
step from a running secant estimate of the local pixels-per-degree
gain.  The plant's gain varies strongly across the screen, so the
estimate is re-learned every cycle.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .engine import PHASE_CALIBRATING, PHASE_DONE, SIM_GEOMETRY, SessionEngine
from .sensors import HeadPose, NoiseModel, SensorGeometry
from .session import SessionConfig, Target

REST = (0.0, 0.0)

# Joystick pose primitives for the default rig: each one pushes the
# filtered pair cleanly into one decision-table case (see SIM_GEOMETRY).
JOYSTICK_POSES = {
    "down": (16.0, 0.0),
    "up": (-20.0, 0.0),
    "left": (16.0, -40.0),
    "right": (16.0, 40.0),
}

# Sweep extremes for direct-mapping calibration.
SWEEP_UP = (-45.0, 0.0)
SWEEP_DOWN = (45.0, 0.0)
SWEEP_LEFT = (5.0, -60.0)
SWEEP_RIGHT = (5.0, 60.0)

DEFAULT_TRIAL_TIMEOUT_MS = 30_000


def _lerp(a: tuple[float, float], b: tuple[float, float], t: float) -> tuple[float, float]:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def _sweep_schedule(total_ticks: int) -> list[tuple[float, float]]:
    """Pose per tick for the calibration sweep, scaled to the window length.

    Each extreme is approached by a straight ramp from rest so both
    channels change monotonically and the threshold-update rules chase
    the true extreme instead of freezing on a transient.
    """
    # (kind, weight): ramps interpolate, holds repeat the endpoint.
    plan = [
        ("hold", REST, 2),
        ("ramp", SWEEP_UP, 4),
        ("hold", SWEEP_UP, 12),
        ("ramp", SWEEP_DOWN, 6),
        ("hold", SWEEP_DOWN, 12),
        ("ramp", REST, 4),
        ("ramp", SWEEP_LEFT, 4),
        ("hold", SWEEP_LEFT, 12),
        ("ramp", REST, 4),
        ("ramp", SWEEP_RIGHT, 4),
        ("hold", SWEEP_RIGHT, 12),
        ("hold", REST, 4),
    ]
    weight_total = sum(w for _, _, w in plan)
    poses: list[tuple[float, float]] = []
    current = REST
    remaining = total_ticks
    for i, (kind, pose, weight) in enumerate(plan):
        ticks = max(1, round(total_ticks * weight / weight_total))
        if i == len(plan) - 1:
            ticks = max(1, remaining)
        ticks = min(ticks, max(1, remaining))
        remaining -= ticks
        if kind == "hold":
            poses.extend([pose] * ticks)
        else:
            for k in range(1, ticks + 1):
                poses.append(_lerp(current, pose, k / ticks))
        current = pose
        if remaining <= 0 and i < len(plan) - 1:
            break
    while len(poses) < total_ticks:
        poses.append(REST)
    return poses[:total_ticks]


@dataclass
class _View:
    """What the user has seen so far (before the reaction delay)."""

    cursor: tuple[float, float]
    target: Target | None


@dataclass
class ScriptedUser:
    reaction_delay_ms: int = 200
    pose_noise_sigma_deg: float = 1.0
    seed: int = 0
    glide_ticks: int = 8            # anticipated coast after releasing a joystick pose
    stop_radius_px: dict | None = None  # optional per-direction override of glide_ticks * speed
    direct_settle_ticks: int = 14   # hold between submovements (roughly the filter window)
    direct_gain_init: float = 8.0   # starting pixels-per-degree estimate
    direct_damping: float = 0.7
    direct_max_step_px: float = 80.0  # ballistic submovement length cap
    direct_max_step_deg: float = 10.0
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(self.seed)
        self._history: deque[_View] = deque(maxlen=64)
        self._sweep: list[tuple[float, float]] = []
        self._sweep_idx = 0
        self._stop_scale = 1.0
        self._stuck = 0
        self._last_target: Target | None = None
        self._cmd_pitch = 0.0
        self._cmd_yaw = 0.0
        self._cycle_tick = 0
        self._cycle_cursor: tuple[float, float] | None = None
        self._applied_step = {"x": 0.0, "y": 0.0}
        self._gain = {"x": self.direct_gain_init, "y": self.direct_gain_init}

    # -- wiring ----------------------------------------------------------

    def delay_ticks(self, period_ms: int) -> int:
        return max(0, round(self.reaction_delay_ms / period_ms))

    def begin_sweep(self, total_ticks: int) -> None:
        self._sweep = _sweep_schedule(total_ticks)
        self._sweep_idx = 0

    def observe(self, cursor: tuple[float, float], target: Target | None) -> None:
        self._history.append(_View(cursor=cursor, target=target))

    def _current_view(self, period_ms: int) -> _View | None:
        """Latest cursor with a reaction-delayed target.

        The delay models how long a newly shown target takes to register;
        ongoing pursuit of self-generated motion is effectively predictive,
        so the cursor position itself is read without the lag.
        """
        lag = self.delay_ticks(period_ms)
        if len(self._history) <= lag:
            return None
        delayed = self._history[-1 - lag]
        if delayed.target is None:
            return None
        return _View(cursor=self._history[-1].cursor, target=delayed.target)

    def _with_tremor(self, pitch: float, yaw: float) -> HeadPose:
        if self.pose_noise_sigma_deg > 0:
            pitch += self._rng.gauss(0.0, self.pose_noise_sigma_deg)
            yaw += self._rng.gauss(0.0, self.pose_noise_sigma_deg)
        return HeadPose(pitch, yaw)

    # -- policies ----------------------------------------------------------

    def calibration_pose(self, mode: str) -> HeadPose:
        if mode == "direct" and self._sweep_idx < len(self._sweep):
            pose = self._sweep[self._sweep_idx]
            self._sweep_idx += 1
            return self._with_tremor(*pose)
        return self._with_tremor(*REST)

    def tracking_pose(self, mode: str, speed: int, period_ms: int) -> HeadPose:
        view = self._current_view(period_ms)
        if view is None or view.target is None:
            if mode == "direct":
                return self._with_tremor(self._cmd_pitch, self._cmd_yaw)
            return self._with_tremor(*REST)
        if view.target is not self._last_target:
            self._last_target = view.target
            self._stop_scale = 1.0
            self._stuck = 0
            self._cycle_tick = 0
            self._cycle_cursor = view.cursor
            self._applied_step = {"x": 0.0, "y": 0.0}
        if mode == "joystick":
            return self._joystick_pose(view, speed)
        return self._direct_pose(view)

    def _stop_radius(self, direction: str, speed: int) -> float:
        base = self.glide_ticks * speed
        if self.stop_radius_px is not None:
            base = self.stop_radius_px.get(direction, base)
        return max(float(speed), base * self._stop_scale)

    def _joystick_pose(self, view: _View, speed: int) -> HeadPose:
        target = view.target
        ex = target.cx - view.cursor[0]
        ey = target.cy - view.cursor[1]
        half = target.w / 2.0
        if abs(ex) <= half and abs(ey) <= half:
            self._stuck = 0
            return self._with_tremor(*REST)
        dir_x = "right" if ex > 0 else "left"
        dir_y = "down" if ey > 0 else "up"
        if abs(ex) > self._stop_radius(dir_x, speed):
            self._stuck = 0
            return self._with_tremor(*JOYSTICK_POSES[dir_x])
        if abs(ey) > self._stop_radius(dir_y, speed):
            self._stuck = 0
            return self._with_tremor(*JOYSTICK_POSES[dir_y])
        # Parked outside the target inside the stop radius: creep closer.
        self._stuck += 1
        if self._stuck >= 20:
            self._stuck = 0
            self._stop_scale = max(0.1, self._stop_scale * 0.5)
        return self._with_tremor(*REST)

    def _direct_pose(self, view: _View) -> HeadPose:
        if self._cycle_cursor is None:
            self._cycle_cursor = view.cursor
        self._cycle_tick += 1
        if self._cycle_tick >= self.direct_settle_ticks:
            self._direct_adjust(view)
            self._cycle_tick = 0
            self._cycle_cursor = view.cursor
        return self._with_tremor(self._cmd_pitch, self._cmd_yaw)

    def _direct_adjust(self, view: _View) -> None:
        """One submovement: refresh the gain estimate, step toward the target."""
        target = view.target
        band = max(2.0, target.w / 4.0)
        errors = {
            "x": target.cx - view.cursor[0],
            "y": target.cy - view.cursor[1],
        }
        moved = {
            "x": view.cursor[0] - self._cycle_cursor[0],
            "y": view.cursor[1] - self._cycle_cursor[1],
        }
        for axis in ("x", "y"):
            applied = self._applied_step[axis]
            if abs(applied) >= 0.3 and abs(moved[axis]) >= 3.0 and moved[axis] * applied > 0:
                self._gain[axis] = min(max(moved[axis] / applied, 0.5), 120.0)
            err = errors[axis]
            if abs(err) <= band:
                self._applied_step[axis] = 0.0
                continue
            want_px = self.direct_damping * err
            want_px = min(max(want_px, -self.direct_max_step_px), self.direct_max_step_px)
            step = want_px / self._gain[axis]
            step = min(max(step, -self.direct_max_step_deg), self.direct_max_step_deg)
            if axis == "y":
                before = self._cmd_pitch
                self._cmd_pitch = min(max(before + step, -45.0), 45.0)
                self._applied_step[axis] = self._cmd_pitch - before
            else:
                before = self._cmd_yaw
                self._cmd_yaw = min(max(before + step, -60.0), 60.0)
                self._applied_step[axis] = self._cmd_yaw - before


def scripted_run(
    config: SessionConfig,
    trials: int | None = None,
    user: ScriptedUser | None = None,
    timeout_ms: int = DEFAULT_TRIAL_TIMEOUT_MS,
    geometry: SensorGeometry = SIM_GEOMETRY,
    noise: NoiseModel | None = None,
    collect_trajectory: bool = False,
    targets=None,
    transcript_sink: list | None = None,
) -> SessionEngine:
    """Close the loop for `trials` targets in config.mode; returns the engine.

    Deterministic per (config.seed, user.seed): the same run always
    yields identical trial rows and trajectories.  Pass a list as
    transcript_sink to capture every emitted protocol message.
    """
    if trials is not None:
        config = SessionConfig(
            mode=config.mode,
            screen=config.screen,
            speed=config.speed,
            calib_duration_ms=config.calib_duration_ms,
            dwell_ms=config.dwell_ms,
            trial_count=trials,
            seed=config.seed,
        )
    engine = SessionEngine(
        config,
        geometry=geometry,
        noise=noise,
        timeout_ms=timeout_ms,
        collect_trajectory=collect_trajectory,
        targets=targets,
    )
    if user is None:
        user = ScriptedUser(seed=config.seed + 2)
    period = engine.schedule.period_ms
    calib_ticks = max(1, config.resolved_calib_ms() // period)
    if config.mode == "direct":
        user.begin_sweep(calib_ticks)
    out = engine.handle({"type": "calibrate", "mode": config.mode})
    if transcript_sink is not None:
        transcript_sink.extend(out)

    target: Target | None = None
    cursor = (engine.cursor.x, engine.cursor.y)
    max_ticks = calib_ticks + (config.trial_count + 1) * (timeout_ms // period + 1)
    for _ in range(max_ticks):
        if engine.phase == PHASE_DONE:
            break
        if engine.phase == PHASE_CALIBRATING:
            pose = user.calibration_pose(config.mode)
        else:
            pose = user.tracking_pose(config.mode, config.speed, period)
        out = engine.pose_tick(pose)
        if transcript_sink is not None:
            transcript_sink.extend(out)
        for msg in out:
            if msg["type"] == "cursor":
                cursor = (float(msg["x"]), float(msg["y"]))
            elif msg["type"] == "trial_start":
                target = Target(cx=msg["cx"], cy=msg["cy"], w=msg["w"])
            elif msg["type"] == "error":
                raise RuntimeError(f"scripted session failed: {msg['reason']}")
        user.observe(cursor, target)
    engine.finish()
    return engine
