"""Session engine: protocol messages in, protocol messages out.

One engine instance owns one session.  It is transport-free and fully
deterministic: the clock is virtual (one tick per pose message, one
sampling period apart), sensor noise comes from the config seed, and
targets from seed + 1.  The TCP/WebSocket edge in `netio` and the
headless drivers in `scripted` and `replay` all feed the same
``handle`` / ``feed_frame`` path, so their outputs are byte-identical
for identical inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import session as sess
from .directmap import DirectCalibrator, DirectThresholds, map_x, map_y
from .errors import CalibrationError
from .filtering import MovingAverageFilter
from .hid import deltas_from_positions, encode_report
from .joystick import JoystickThresholds, calibrate_joystick, joystick_step
from .metrics import TrialRecord
from .sensors import HeadPose, NoiseModel, SamplingSchedule, SensorFrame, SensorGeometry, sample_frame
from .session import CursorState, SessionConfig, begin_trial, gen_target, trial_tick

PHASE_IDLE = "idle"
PHASE_CALIBRATING = "calibrating"
PHASE_RUNNING = "running"
PHASE_DONE = "done"

# Desk-scale rig for the simulated sensors.  The rest distance sits where
# the normalized ADC reads ~50 counts, leaving headroom on both sides of
# the joystick band; the gentle gains spread the pose range over the
# usable part of the inverse-square curve.  (The type defaults describe
# the physical mounting, but at 1.5 in the rest level is only 4 counts,
# less than the 5-count lower band offset, so no gateway session could
# ever move up.)
SIM_GEOMETRY = SensorGeometry(
    rest_distance_in=0.45,
    pitch_gain_in_per_deg=0.004,
    yaw_gain_in_per_deg=0.005,
)

_POSE_FIELDS = ("pitch_deg", "yaw_deg")


@dataclass
class TrialRow:
    """One line of the trial log CSV."""

    trial: int
    mode: str
    d_px: float
    w_px: int
    mt_ms: int
    p_px: float
    success: bool

    def record(self) -> TrialRecord:
        return TrialRecord(
            d_px=self.d_px, w_px=self.w_px, mt_ms=self.mt_ms, p_px=self.p_px, success=self.success
        )


class SessionEngine:
    def __init__(
        self,
        config: SessionConfig,
        geometry: SensorGeometry = SIM_GEOMETRY,
        noise: NoiseModel | None = None,
        schedule: SamplingSchedule | None = None,
        timeout_ms: int | None = None,
        collect_trajectory: bool = False,
        targets=None,
    ):
        self.config = config
        self.geometry = geometry
        self.noise = noise if noise is not None else NoiseModel(seed=config.seed)
        self.schedule = schedule or SamplingSchedule()
        self.timeout_ms = timeout_ms
        self.collect_trajectory = collect_trajectory
        # Preset targets are consumed first; randomized ones follow.
        self._preset_targets = list(targets) if targets else []
        self._preset_idx = 0
        self._reset_session()

    def _reset_session(self) -> None:
        cfg = self.config
        self._noise_rng = self.noise.make_rng()
        self._target_rng = random.Random(cfg.seed + 1)
        self._filter = MovingAverageFilter()
        self._cursor = CursorState(cfg.screen.xaxis / 2, cfg.screen.yaxis / 2, cfg.screen)
        self._t_next = 0
        self._seq = 0
        self.phase = PHASE_IDLE
        self.mode = cfg.mode
        self.thresholds: JoystickThresholds | DirectThresholds | None = None
        self._calib_start: int | None = None
        self._calib_frames: list = []
        self._direct_cal: DirectCalibrator | None = None
        self._trial = None
        self.trial_rows: list[TrialRow] = []
        self.trajectory: list[tuple[int, float, float]] = []

    # -- message plumbing ------------------------------------------------

    @property
    def cursor(self) -> CursorState:
        return self._cursor

    def trial_records(self) -> list[TrialRecord]:
        return [row.record() for row in self.trial_rows]

    @staticmethod
    def _error(reason: str) -> dict:
        return {"type": "error", "reason": reason}

    def _state_msg(self, phase: str, **extra) -> dict:
        msg = {"type": "state", "phase": phase, "mode": self.mode}
        msg.update(extra)
        return msg

    def handle(self, msg) -> list[dict]:
        """Process one inbound message; returns the messages to send back."""
        if not isinstance(msg, dict) or "type" not in msg:
            return [self._error("message missing field: type")]
        mtype = msg["type"]
        if mtype == "pose":
            for name in _POSE_FIELDS:
                if not isinstance(msg.get(name), (int, float)):
                    return [self._error(f"pose missing numeric field: {name}")]
            return self.pose_tick(HeadPose(msg["pitch_deg"], msg["yaw_deg"]))
        if mtype == "calibrate":
            mode = msg.get("mode")
            if mode not in sess.MODES:
                return [self._error(f"calibrate: mode must be one of {'|'.join(sess.MODES)}")]
            return self.start_calibration(mode)
        if mtype == "config":
            return self._apply_config(msg)
        return [self._error(f"unknown message type: {mtype}")]

    def _apply_config(self, msg: dict) -> list[dict]:
        if self.phase not in (PHASE_IDLE, PHASE_DONE):
            return [self._error("config: only accepted while idle")]
        cfg = self.config
        try:
            screen = cfg.screen
            if "screen" in msg:
                screen = sess.Screen(int(msg["screen"]["xaxis"]), int(msg["screen"]["yaxis"]))
            new = SessionConfig(
                mode=msg.get("mode", cfg.mode),
                screen=screen,
                speed=int(msg.get("speed", cfg.speed)),
                calib_duration_ms=msg.get("calib_duration_ms", cfg.calib_duration_ms),
                dwell_ms=int(msg.get("dwell_ms", cfg.dwell_ms)),
                trial_count=int(msg.get("trial_count", cfg.trial_count)),
                seed=int(msg.get("seed", cfg.seed)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            return [self._error(f"config: {exc}")]
        self.config = new
        self.noise = NoiseModel(
            ambient_offset=self.noise.ambient_offset,
            gaussian_sigma=self.noise.gaussian_sigma,
            seed=new.seed,
        )
        self._reset_session()
        return [self._state_msg(PHASE_IDLE, config=self.config_dict())]

    def config_dict(self) -> dict:
        cfg = self.config
        return {
            "mode": cfg.mode,
            "screen": {"xaxis": cfg.screen.xaxis, "yaxis": cfg.screen.yaxis},
            "speed": cfg.speed,
            "calib_duration_ms": cfg.resolved_calib_ms(),
            "dwell_ms": cfg.dwell_ms,
            "trial_count": cfg.trial_count,
            "seed": cfg.seed,
        }

    # -- session control -------------------------------------------------

    def start_calibration(self, mode: str) -> list[dict]:
        self.mode = mode
        self.phase = PHASE_CALIBRATING
        self.thresholds = None
        self._trial = None
        self._calib_start = None
        self._calib_frames = []
        self._direct_cal = DirectCalibrator() if mode == "direct" else None
        return [self._state_msg(PHASE_CALIBRATING)]

    def preset_thresholds(self, mode: str, thresholds) -> None:
        """Resume a session from a saved calibration instead of sweeping."""
        expected = DirectThresholds if mode == "direct" else JoystickThresholds
        if not isinstance(thresholds, expected):
            raise ValueError(f"{mode} mode needs {expected.__name__}")
        self.mode = mode
        self.thresholds = thresholds
        self.phase = PHASE_RUNNING
        self._trial = None

    def pose_tick(self, pose: HeadPose) -> list[dict]:
        """Advance the virtual clock one period and sample the rig."""
        frame = sample_frame(pose, self._t_next, self.geometry, self.noise, self._noise_rng)
        return self.feed_frame(frame)

    def feed_frame(self, frame: SensorFrame) -> list[dict]:
        """Run one raw frame through filter, calibration or controller, and trials."""
        out: list[dict] = []
        self._t_next = frame.t_ms + self.schedule.period_ms
        seq = self._seq
        self._seq += 1
        ff = self._filter.step(frame)
        out.append(
            {
                "type": "frame",
                "t_ms": frame.t_ms,
                "seq": seq,
                "s1": frame.s1,
                "s2": frame.s2,
                "f1": ff.f1,
                "f2": ff.f2,
            }
        )

        if self.phase == PHASE_CALIBRATING:
            if self._calib_start is None:
                self._calib_start = ff.t_ms
            window_ms = self.config.resolved_calib_ms(self.mode)
            if ff.t_ms < self._calib_start + window_ms:
                self._calib_update(ff, out)
            else:
                self._calib_finish(ff.t_ms, out)

        moved_from = self._cursor
        if self.phase == PHASE_RUNNING:
            self._drive_cursor(ff)
        x, y = self._cursor.as_ints()
        out.append({"type": "cursor", "t_ms": ff.t_ms, "seq": seq, "x": x, "y": y})
        for dx, dy in deltas_from_positions(moved_from, self._cursor):
            out.append(
                {"type": "hid", "t_ms": ff.t_ms, "report_hex": encode_report(0, dx, dy).hex()}
            )
        if self.collect_trajectory:
            self.trajectory.append((ff.t_ms, self._cursor.x, self._cursor.y))

        if self.phase == PHASE_RUNNING:
            self._advance_trial(ff.t_ms, out)
        return out

    # -- internals ---------------------------------------------------------

    def _calib_update(self, ff, out: list[dict]) -> None:
        self._calib_frames.append(ff)
        if self._direct_cal is not None:
            self._direct_cal.update(ff)
            out.append(
                self._state_msg(PHASE_CALIBRATING, progress=dict(self._direct_cal.update_counts))
            )
        else:
            out.append(self._state_msg(PHASE_CALIBRATING, progress={"samples": len(self._calib_frames)}))

    def _calib_finish(self, t_ms: int, out: list[dict]) -> None:
        try:
            if self._direct_cal is not None:
                self.thresholds = self._direct_cal.result()
            else:
                window_ms = self.config.resolved_calib_ms(self.mode)
                self.thresholds = calibrate_joystick(self._calib_frames, window_ms)
        except CalibrationError as exc:
            self.phase = PHASE_IDLE
            out.append(self._error(str(exc)))
            out.append(self._state_msg(PHASE_IDLE))
            return
        out.append(self._state_msg("calibrated", thresholds=self.thresholds.as_dict()))
        self.phase = PHASE_RUNNING

    def _start_trial(self, t_ms: int, out: list[dict]) -> None:
        if self._preset_idx < len(self._preset_targets):
            target = self._preset_targets[self._preset_idx]
            self._preset_idx += 1
        else:
            target = gen_target(self._target_rng, self.config.screen, self._cursor)
        self._trial = begin_trial(target, self._cursor, t_ms, self.config.dwell_ms)
        out.append(
            {
                "type": "trial_start",
                "t_ms": t_ms,
                "trial": len(self.trial_rows) + 1,
                "cx": target.cx,
                "cy": target.cy,
                "w": target.w,
                "d": round(self._trial.d_px, 3),
            }
        )

    def _drive_cursor(self, ff) -> None:
        if self.mode == "joystick":
            delta = joystick_step(self.thresholds, ff, self.config.speed)
            self._cursor = sess.apply_delta(self._cursor, delta)
        else:
            x = map_x(ff.f1, ff.f2, self.thresholds, self.config.screen)
            y = map_y(ff.f1, ff.f2, self.thresholds, self.config.screen)
            self._cursor = sess.set_absolute(self._cursor, x, y)

    def _advance_trial(self, t_ms: int, out: list[dict]) -> None:
        tr = self._trial
        if tr is None:
            self._start_trial(t_ms, out)
            return
        if tr.start_t == t_ms:
            return
        trial_tick(tr, self._cursor, t_ms)
        if (
            tr.status == sess.STATUS_RUNNING
            and self.timeout_ms is not None
            and t_ms - tr.start_t >= self.timeout_ms
        ):
            sess.abort_trial(tr, t_ms)
        if tr.status == sess.STATUS_RUNNING:
            return
        self._log_trial(tr, out)
        if len(self.trial_rows) >= self.config.trial_count:
            self.phase = PHASE_DONE
            self._trial = None
            out.append(self._state_msg(PHASE_DONE))
        else:
            self._start_trial(t_ms, out)

    def _log_trial(self, tr, out: list[dict]) -> None:
        row = TrialRow(
            trial=len(self.trial_rows) + 1,
            mode=self.mode,
            d_px=round(tr.d_px, 3),
            w_px=tr.target.w,
            mt_ms=int(tr.mt_ms),
            p_px=round(tr.path_len_px, 3),
            success=tr.status == sess.STATUS_SUCCESS,
        )
        self.trial_rows.append(row)
        out.append(
            {
                "type": "trial_result",
                "t_ms": tr.start_t + (tr.mt_ms or 0),
                "trial": row.trial,
                "mt_ms": row.mt_ms,
                "p_px": row.p_px,
                "success": row.success,
            }
        )

    def finish(self) -> None:
        """Abort any running trial (connection loss, end of replay input)."""
        tr = self._trial
        if tr is not None and tr.status == sess.STATUS_RUNNING:
            sess.abort_trial(tr, self._t_next - self.schedule.period_ms)
            self._log_trial(tr, [])
            self._trial = None


class ReplayError(ValueError):
    """A recorded trace could not be driven through the pipeline."""


def replay_frames(
    frames,
    config: SessionConfig,
    thresholds=None,
    timeout_ms: int | None = None,
    geometry: SensorGeometry = SIM_GEOMETRY,
) -> SessionEngine:
    """Feed recorded frames through filter, calibration, and controller.

    Deterministic: the same frames and config always produce identical
    trajectories and trial rows.  Calibration failures (for example a
    trace shorter than the calibration window, which never leaves it)
    surface as ReplayError.
    """
    engine = SessionEngine(config, geometry=geometry, timeout_ms=timeout_ms, collect_trajectory=True)
    if thresholds is not None:
        engine.preset_thresholds(config.mode, thresholds)
    else:
        engine.start_calibration(config.mode)
    for frame in frames:
        for msg in engine.feed_frame(frame):
            if msg["type"] == "error":
                raise ReplayError(msg["reason"])
    if engine.phase == PHASE_CALIBRATING:
        raise ReplayError("trace ended inside the calibration window")
    engine.finish()
    return engine
