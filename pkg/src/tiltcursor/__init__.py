"""Head-tilt cursor control: simulated sensing, two cursor modes, and evaluation."""

from .directmap import (
    DirectCalibrator,
    DirectThresholds,
    Screen,
    calibrate_direct,
    map_x,
    map_x_left,
    map_x_right,
    map_y,
)
from .engine import SIM_GEOMETRY, SessionEngine, replay_frames
from .errors import CalibrationError, DegenerateThresholdError, ReportRangeError, TraceFormatError
from .filtering import FilteredFrame, MovingAverageFilter
from .hid import HidReport, decode_report, deltas_from_positions, encode_report
from .joystick import CursorDelta, JoystickThresholds, calibrate_joystick, joystick_step
from .metrics import TrialRecord, index_of_difficulty, path_efficiency, summarize, throughput
from .scripted import ScriptedUser, scripted_run
from .sensors import (
    HeadPose,
    NoiseModel,
    SamplingSchedule,
    SensorFrame,
    SensorGeometry,
    distance_to_adc,
    pose_to_distances,
    sample_frame,
    trace_decode,
    trace_encode,
)
from .session import (
    CursorState,
    SessionConfig,
    Target,
    TrialState,
    apply_delta,
    begin_trial,
    gen_target,
    set_absolute,
    trial_tick,
)

__all__ = [
    "CalibrationError",
    "CursorDelta",
    "CursorState",
    "DegenerateThresholdError",
    "DirectCalibrator",
    "DirectThresholds",
    "FilteredFrame",
    "HeadPose",
    "HidReport",
    "JoystickThresholds",
    "MovingAverageFilter",
    "NoiseModel",
    "ReportRangeError",
    "SIM_GEOMETRY",
    "SamplingSchedule",
    "Screen",
    "ScriptedUser",
    "SensorFrame",
    "SensorGeometry",
    "SessionConfig",
    "SessionEngine",
    "Target",
    "TraceFormatError",
    "TrialRecord",
    "TrialState",
    "apply_delta",
    "begin_trial",
    "calibrate_direct",
    "calibrate_joystick",
    "decode_report",
    "deltas_from_positions",
    "distance_to_adc",
    "encode_report",
    "gen_target",
    "index_of_difficulty",
    "joystick_step",
    "map_x",
    "map_x_left",
    "map_x_right",
    "map_y",
    "path_efficiency",
    "pose_to_distances",
    "replay_frames",
    "sample_frame",
    "scripted_run",
    "set_absolute",
    "summarize",
    "throughput",
    "trace_decode",
    "trace_encode",
    "trial_tick",
]

__version__ = "0.1.0"
