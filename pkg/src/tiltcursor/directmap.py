"""Direct mapping mode: extreme-sweep calibration and absolute pose-to-pixel maps.

During a 4-second calibration sweep the user pushes the head to its
up/down/left/right extremes.  Eight thresholds (four per sensor) start
at the first frame's levels and chase the extremes:

  * up:    both channels below their current up thresholds
  * down:  both channels above their current down thresholds
  * left:  channel 1 above its left threshold while channel 2 is below
  * right: channel 1 below its right threshold while channel 2 is above

After the window the thresholds freeze and drive the coordinate maps.
Vertical position comes from the channel average normalized between the
up and down extremes.  Horizontal position uses the channel difference,
one formula per half screen, chosen by the sign of (f2 - f1) so the two
halves meet exactly at the center.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CalibrationError, DegenerateThresholdError
from .filtering import FilteredFrame

EXTREMES = ("up", "down", "left", "right")


@dataclass(frozen=True)
class Screen:
    xaxis: int  # width in pixels
    yaxis: int  # height in pixels

    def __post_init__(self):
        if self.xaxis <= 0 or self.yaxis <= 0:
            raise ValueError("screen dimensions must be positive")


@dataclass(frozen=True)
class DirectThresholds:
    u1: float
    d1: float
    l1: float
    r1: float
    u2: float
    d2: float
    l2: float
    r2: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("u1", "d1", "l1", "r1", "u2", "d2", "l2", "r2")}

    @classmethod
    def from_dict(cls, data: dict) -> "DirectThresholds":
        return cls(**{k: float(data[k]) for k in ("u1", "d1", "l1", "r1", "u2", "d2", "l2", "r2")})


class DirectCalibrator:
    """Streaming fold of the four update rules, with per-rule hit counts.

    The counts are diagnostics: a rule that never fired means the
    matching extreme was never visited during the sweep.
    """

    def __init__(self):
        self._th: list[float] | None = None  # [u1, d1, l1, r1, u2, d2, l2, r2]
        self.update_counts = dict.fromkeys(EXTREMES, 0)
        self.frames_seen = 0

    def update(self, f: FilteredFrame) -> None:
        self.frames_seen += 1
        if self._th is None:
            self._th = [f.f1, f.f1, f.f1, f.f1, f.f2, f.f2, f.f2, f.f2]
            return
        th = self._th
        u1, d1, l1, r1, u2, d2, l2, r2 = th
        if f.f1 < u1 and f.f2 < u2:
            th[0], th[4] = f.f1, f.f2
            self.update_counts["up"] += 1
        if f.f1 > d1 and f.f2 > d2:
            th[1], th[5] = f.f1, f.f2
            self.update_counts["down"] += 1
        if f.f1 > l1 and f.f2 < l2:
            th[2], th[6] = f.f1, f.f2
            self.update_counts["left"] += 1
        if f.f1 < r1 and f.f2 > r2:
            th[3], th[7] = f.f1, f.f2
            self.update_counts["right"] += 1

    def result(self) -> DirectThresholds:
        """Freeze and validate; raises CalibrationError naming unreached extremes."""
        if self._th is None:
            raise CalibrationError("no frames in calibration window")
        u1, d1, l1, r1, u2, d2, l2, r2 = self._th
        missing = []
        if (u1 + u2) / 2.0 == (d1 + d2) / 2.0:
            missing.extend(("up", "down"))
        if l1 - l2 == 0.0:
            missing.append("left")
        if r2 - r1 == 0.0:
            missing.append("right")
        if missing:
            raise CalibrationError(
                "calibration incomplete, missing extremes: " + ", ".join(missing),
                missing=tuple(missing),
            )
        return DirectThresholds(u1=u1, d1=d1, l1=l1, r1=r1, u2=u2, d2=d2, l2=l2, r2=r2)


def calibrate_direct(frames, duration_ms: int = 4000) -> DirectThresholds:
    """Run the sweep calibration over frames within [t0, t0 + duration_ms)."""
    cal = DirectCalibrator()
    t_end = None
    for f in frames:
        if t_end is None:
            t_end = f.t_ms + duration_ms
        if f.t_ms >= t_end:
            break
        cal.update(f)
    return cal.result()


def map_y(f1: float, f2: float, th: DirectThresholds, screen: Screen) -> float:
    """Vertical map: channel average normalized between up and down extremes."""
    up = (th.u1 + th.u2) / 2.0
    down = (th.d1 + th.d2) / 2.0
    if down == up:
        raise DegenerateThresholdError("up and down thresholds coincide")
    level = (f1 + f2) / 2.0
    y = screen.yaxis * (level - up) / (down - up)
    return min(max(y, 0.0), float(screen.yaxis))


def map_x_left(f1: float, f2: float, th: DirectThresholds, screen: Screen) -> float:
    """Left-half formula, valid for f1 >= f2; clamped to [0, xaxis/2]."""
    denom = th.l1 - th.l2
    if denom == 0.0:
        raise DegenerateThresholdError("left thresholds coincide")
    half = screen.xaxis / 2.0
    x = (1.0 - (f1 - f2) / denom) * half
    return min(max(x, 0.0), half)


def map_x_right(f1: float, f2: float, th: DirectThresholds, screen: Screen) -> float:
    """Right-half formula, valid for f2 >= f1; clamped to [xaxis/2, xaxis]."""
    denom = th.r2 - th.r1
    if denom == 0.0:
        raise DegenerateThresholdError("right thresholds coincide")
    half = screen.xaxis / 2.0
    x = (f2 - f1) / denom * half + half
    return min(max(x, half), float(screen.xaxis))


def map_x(f1: float, f2: float, th: DirectThresholds, screen: Screen) -> float:
    """Horizontal map: the half-screen branch picked by the sign of (f2 - f1)."""
    if f2 >= f1:
        return map_x_right(f1, f2, th, screen)
    return map_x_left(f1, f2, th, screen)
