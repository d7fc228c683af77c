"""Joystick mode: rest-band calibration and the four-way decision rule.

Calibration samples the resting signal level and brackets it with a
fixed band, 5 counts below and 10 above the rest mean per channel.
Because the band rides on the measured rest level, a constant ambient
shift moves thresholds and signals together and the emitted motion is
unchanged.

Screen coordinates grow downward.  A physical tilt-down strengthens
both channels and moves the cursor down, so the both-strong case emits
dy = +speed.  Flip VERTICAL_SIGN for a Y-up display.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CalibrationError
from .filtering import FilteredFrame

LOWER_OFFSET = 5.0
UPPER_OFFSET = 10.0

# +1: screen Y increases downward (tilt-down drives the cursor down).
VERTICAL_SIGN = 1


@dataclass(frozen=True)
class JoystickThresholds:
    lower1: float
    upper1: float
    lower2: float
    upper2: float

    def as_dict(self) -> dict:
        return {
            "lower1": self.lower1,
            "upper1": self.upper1,
            "lower2": self.lower2,
            "upper2": self.upper2,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JoystickThresholds":
        return cls(
            lower1=float(data["lower1"]),
            upper1=float(data["upper1"]),
            lower2=float(data["lower2"]),
            upper2=float(data["upper2"]),
        )


@dataclass(frozen=True)
class CursorDelta:
    dx: int
    dy: int

    def __bool__(self) -> bool:
        return self.dx != 0 or self.dy != 0


def calibrate_joystick(frames, duration_ms: int = 100) -> JoystickThresholds:
    """Bracket the rest level observed over the first duration_ms of frames.

    The window is [t0, t0 + duration_ms) measured from the first frame.
    The user is assumed to hold the resting pose throughout.
    """
    frames = list(frames)
    if not frames:
        raise CalibrationError("no frames in calibration window")
    t_end = frames[0].t_ms + duration_ms
    window = [f for f in frames if f.t_ms < t_end]
    if not window:
        raise CalibrationError("no frames in calibration window")
    init1 = sum(f.f1 for f in window) / len(window)
    init2 = sum(f.f2 for f in window) / len(window)
    return JoystickThresholds(
        lower1=init1 - LOWER_OFFSET,
        upper1=init1 + UPPER_OFFSET,
        lower2=init2 - LOWER_OFFSET,
        upper2=init2 + UPPER_OFFSET,
    )


def joystick_step(th: JoystickThresholds, f: FilteredFrame, speed: int = 1) -> CursorDelta:
    """Decide one tick of constant-speed motion from the filtered pair.

    Both strong -> down; both weak -> up; left strong + right weak ->
    left; left weak + right strong -> right.  Every other combination is
    the dead zone and emits nothing.
    """
    above1 = f.f1 > th.upper1
    below1 = f.f1 < th.lower1
    above2 = f.f2 > th.upper2
    below2 = f.f2 < th.lower2
    if above1 and above2:
        return CursorDelta(0, VERTICAL_SIGN * speed)
    if below1 and below2:
        return CursorDelta(0, -VERTICAL_SIGN * speed)
    if above1 and below2:
        return CursorDelta(-speed, 0)
    if below1 and above2:
        return CursorDelta(speed, 0)
    return CursorDelta(0, 0)
