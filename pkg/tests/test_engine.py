import json
from pathlib import Path

import pytest

from tiltcursor.engine import (
    PHASE_DONE,
    PHASE_RUNNING,
    ReplayError,
    SessionEngine,
    replay_frames,
)
from tiltcursor.joystick import JoystickThresholds
from tiltcursor.sensors import HeadPose, NoiseModel, sample_frame
from tiltcursor.session import SessionConfig, Target
from tiltcursor.engine import SIM_GEOMETRY

DATA = Path(__file__).parent / "data"


def quiet_engine(**kw):
    cfg = kw.pop("config", SessionConfig(mode="joystick", seed=0, trial_count=2))
    return SessionEngine(cfg, noise=NoiseModel(gaussian_sigma=0.0, seed=0), **kw)


def drive(engine, pose, ticks):
    out = []
    for _ in range(ticks):
        out.extend(engine.handle({"type": "pose", "pitch_deg": pose[0], "yaw_deg": pose[1]}))
    return out


def test_unknown_type_is_error_not_fatal():
    eng = quiet_engine()
    out = eng.handle({"type": "zoom"})
    assert out == [{"type": "error", "reason": "unknown message type: zoom"}]
    assert eng.handle({"type": "calibrate", "mode": "joystick"})[0]["type"] == "state"


def test_malformed_pose_names_field():
    eng = quiet_engine()
    out = eng.handle({"type": "pose", "yaw_deg": 0})
    assert "pitch_deg" in out[0]["reason"]
    out = eng.handle({"type": "pose", "pitch_deg": "x", "yaw_deg": 0})
    assert out[0]["type"] == "error"


def test_message_without_type_rejected():
    eng = quiet_engine()
    assert eng.handle({"pitch_deg": 1})[0]["type"] == "error"
    assert eng.handle("pose")[0]["type"] == "error"


def test_joystick_calibration_echoes_thresholds():
    eng = quiet_engine()
    eng.handle({"type": "calibrate", "mode": "joystick"})
    out = drive(eng, (0, 0), 3)
    states = [m for m in out if m["type"] == "state" and m["phase"] == "calibrated"]
    assert states[0]["thresholds"] == {"lower1": 45.0, "upper1": 60.0, "lower2": 45.0, "upper2": 60.0}
    assert eng.phase == PHASE_RUNNING


def test_golden_transcript_regression():
    eng = quiet_engine()
    lines = []
    for m in eng.handle({"type": "calibrate", "mode": "joystick"}):
        lines.append(json.dumps(m, separators=(",", ":")))
    for _ in range(3):
        for m in eng.handle({"type": "pose", "pitch_deg": 0.0, "yaw_deg": 0.0}):
            lines.append(json.dumps(m, separators=(",", ":")))
    for _ in range(10):
        for m in eng.handle({"type": "pose", "pitch_deg": 15.0, "yaw_deg": 0.0}):
            lines.append(json.dumps(m, separators=(",", ":")))
    expected = (DATA / "golden_joystick_transcript.jsonl").read_text().splitlines()
    assert lines == expected


def test_pitch_down_stream_moves_cursor_down_by_speed():
    eng = quiet_engine()
    eng.handle({"type": "calibrate", "mode": "joystick"})
    drive(eng, (0, 0), 3)
    out = drive(eng, (15, 0), 12)
    ys = [m["y"] for m in out if m["type"] == "cursor"]
    moving = [b - a for a, b in zip(ys, ys[1:]) if b != a]
    assert moving and all(step == eng.config.speed for step in moving)
    hid = [m for m in out if m["type"] == "hid"]
    assert hid and all(m["report_hex"] == "000006" for m in hid)


def test_sequence_numbers_contiguous_one_cursor_per_frame():
    eng = quiet_engine()
    eng.handle({"type": "calibrate", "mode": "joystick"})
    out = drive(eng, (5, 5), 40)
    frames = [m for m in out if m["type"] == "frame"]
    cursors = [m for m in out if m["type"] == "cursor"]
    assert len(frames) == len(cursors) == 40
    assert [m["seq"] for m in frames] == list(range(40))
    assert [m["seq"] for m in cursors] == list(range(40))


def test_config_only_while_idle():
    eng = quiet_engine()
    eng.handle({"type": "calibrate", "mode": "joystick"})
    drive(eng, (0, 0), 3)
    out = eng.handle({"type": "config", "seed": 5})
    assert out[0]["type"] == "error"


def test_config_applies_and_resets():
    eng = quiet_engine()
    out = eng.handle({"type": "config", "mode": "direct", "screen": {"xaxis": 800, "yaxis": 600}, "seed": 3})
    assert out[0]["type"] == "state"
    assert out[0]["config"]["screen"] == {"xaxis": 800, "yaxis": 600}
    assert eng.config.mode == "direct"
    out = eng.handle({"type": "config", "speed": 0})
    assert out[0]["type"] == "error"


def test_direct_calibration_failure_reports_and_idles():
    eng = quiet_engine(config=SessionConfig(mode="direct", seed=0, calib_duration_ms=500))
    eng.handle({"type": "calibrate", "mode": "direct"})
    out = drive(eng, (0, 0), 12)  # constant rest: no extremes
    errors = [m for m in out if m["type"] == "error"]
    assert errors and "missing extremes" in errors[0]["reason"]
    assert eng.phase == "idle"


def test_preset_thresholds_skip_calibration():
    eng = quiet_engine()
    eng.preset_thresholds("joystick", JoystickThresholds(45, 60, 45, 60))
    out = drive(eng, (15, 0), 20)
    assert any(m["type"] == "trial_start" for m in out)
    ys = [m["y"] for m in out if m["type"] == "cursor"]
    assert ys[-1] > ys[0]


def test_trial_timeout_aborts_and_moves_on():
    cfg = SessionConfig(mode="joystick", seed=0, trial_count=2)
    eng = SessionEngine(cfg, noise=NoiseModel(gaussian_sigma=0.0, seed=0), timeout_ms=1000)
    eng.handle({"type": "calibrate", "mode": "joystick"})
    out = drive(eng, (0, 0), 50)  # resting: never reaches the target
    results = [m for m in out if m["type"] == "trial_result"]
    assert len(results) == 2
    assert all(m["success"] is False for m in results)
    assert eng.phase == PHASE_DONE
    assert all(r.mt_ms == 1000 for r in eng.trial_rows)


def test_preset_targets_consumed_first():
    cfg = SessionConfig(mode="joystick", seed=0, trial_count=2)
    eng = SessionEngine(
        cfg,
        noise=NoiseModel(gaussian_sigma=0.0, seed=0),
        targets=[Target(cx=320, cy=300, w=80)],
        timeout_ms=2000,
    )
    eng.handle({"type": "calibrate", "mode": "joystick"})
    out = drive(eng, (0, 0), 80)
    starts = [m for m in out if m["type"] == "trial_start"]
    assert (starts[0]["cx"], starts[0]["cy"], starts[0]["w"]) == (320, 300, 80)


def make_trace(poses, sigma=1.0, seed=3):
    noise = NoiseModel(gaussian_sigma=sigma, seed=seed)
    rng = noise.make_rng()
    return [sample_frame(p, i * 50, SIM_GEOMETRY, noise, rng) for i, p in enumerate(poses)]


def test_replay_is_deterministic():
    poses = [HeadPose(0, 0)] * 4 + [HeadPose(16, 0)] * 40 + [HeadPose(-20, 0)] * 40
    frames = make_trace(poses)
    cfg = SessionConfig(mode="joystick", seed=0)
    a = replay_frames(frames, cfg)
    b = replay_frames(frames, cfg)
    assert a.trajectory == b.trajectory
    assert a.trial_rows == b.trial_rows
    assert len(a.trajectory) == len(frames)


def test_replay_too_short_for_calibration():
    frames = make_trace([HeadPose(0, 0)])  # one frame: never leaves the window
    with pytest.raises(ReplayError):
        replay_frames(frames, SessionConfig(mode="joystick", seed=0))


def test_replay_with_preset_thresholds():
    poses = [HeadPose(16, 0)] * 30
    frames = make_trace(poses, sigma=0.0)
    eng = replay_frames(
        frames,
        SessionConfig(mode="joystick", seed=0),
        thresholds=JoystickThresholds(45, 60, 45, 60),
    )
    ys = [y for _, _, y in eng.trajectory]
    assert ys[-1] > ys[0]


def test_finish_logs_running_trial_as_aborted():
    eng = quiet_engine()
    eng.handle({"type": "calibrate", "mode": "joystick"})
    drive(eng, (0, 0), 10)
    assert eng.trial_rows == []
    eng.finish()
    assert len(eng.trial_rows) == 1
    assert eng.trial_rows[0].success is False
