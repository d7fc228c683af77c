"""Session state: cursor movement, target generation, and the trial lifecycle.

A trial runs until the cursor has stayed inside the target square for a
full dwell period.  Movement time stops at the beginning of that final
dwell; the path length keeps accumulating every tick the trial runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .directmap import Screen
from .joystick import CursorDelta

MODES = ("joystick", "direct")

TARGET_W_MIN = 40
TARGET_W_MAX = 160

STATUS_RUNNING = "running"
STATUS_SUCCESS = "success"
STATUS_ABORTED = "aborted"

_CALIB_DEFAULT_MS = {"joystick": 100, "direct": 4000}


@dataclass(frozen=True)
class CursorState:
    """Absolute cursor position, always clamped inside the screen."""

    x: float
    y: float
    screen: Screen

    def __post_init__(self):
        object.__setattr__(self, "x", min(max(float(self.x), 0.0), float(self.screen.xaxis)))
        object.__setattr__(self, "y", min(max(float(self.y), 0.0), float(self.screen.yaxis)))

    def as_ints(self) -> tuple[int, int]:
        return int(round(self.x)), int(round(self.y))


def apply_delta(c: CursorState, d: CursorDelta) -> CursorState:
    return CursorState(c.x + d.dx, c.y + d.dy, c.screen)


def set_absolute(c: CursorState, x: float, y: float) -> CursorState:
    return CursorState(x, y, c.screen)


@dataclass(frozen=True)
class Target:
    cx: int
    cy: int
    w: int  # side of the square

    def contains(self, x: float, y: float) -> bool:
        half = self.w / 2.0
        return abs(x - self.cx) <= half and abs(y - self.cy) <= half


def gen_target(
    rng: random.Random,
    screen: Screen,
    cursor: CursorState,
    w_min: int = TARGET_W_MIN,
    w_max: int = TARGET_W_MAX,
) -> Target:
    """Draw a random target square that fits the screen, farther than w from the cursor.

    The distance floor keeps D > W, so every trial has an index of
    difficulty above 1.
    """
    w = rng.randint(w_min, w_max)
    half = math.ceil(w / 2)
    if screen.xaxis < 2 * half or screen.yaxis < 2 * half:
        raise ValueError("screen too small for the requested target width")
    while True:
        cx = rng.randint(half, screen.xaxis - half)
        cy = rng.randint(half, screen.yaxis - half)
        if math.hypot(cx - cursor.x, cy - cursor.y) > w:
            return Target(cx=cx, cy=cy, w=w)


@dataclass
class TrialState:
    target: Target
    start_x: float
    start_y: float
    start_t: int
    dwell_ms: int = 2000
    dwell_start: int | None = None
    path_len_px: float = 0.0
    status: str = STATUS_RUNNING
    mt_ms: int | None = None
    last_x: float = field(init=False)
    last_y: float = field(init=False)
    d_px: float = field(init=False)

    def __post_init__(self):
        self.last_x = self.start_x
        self.last_y = self.start_y
        self.d_px = math.hypot(self.target.cx - self.start_x, self.target.cy - self.start_y)


def begin_trial(target: Target, cursor: CursorState, t_ms: int, dwell_ms: int = 2000) -> TrialState:
    return TrialState(target=target, start_x=cursor.x, start_y=cursor.y, start_t=t_ms, dwell_ms=dwell_ms)


def trial_tick(tr: TrialState, c: CursorState, t_ms: int) -> TrialState:
    """Advance the trial one sampled position.

    Accumulates the Euclidean step into the path, tracks dwell entry and
    exit, and flips to success once a full dwell has elapsed inside the
    target.  Movement time excludes that final dwell.
    """
    if tr.status != STATUS_RUNNING:
        return tr
    tr.path_len_px += math.hypot(c.x - tr.last_x, c.y - tr.last_y)
    tr.last_x = c.x
    tr.last_y = c.y
    if tr.target.contains(c.x, c.y):
        if tr.dwell_start is None:
            tr.dwell_start = t_ms
        if t_ms - tr.dwell_start >= tr.dwell_ms:
            tr.status = STATUS_SUCCESS
            tr.mt_ms = tr.dwell_start - tr.start_t
    else:
        tr.dwell_start = None
    return tr


def abort_trial(tr: TrialState, t_ms: int) -> TrialState:
    if tr.status == STATUS_RUNNING:
        tr.status = STATUS_ABORTED
        tr.mt_ms = t_ms - tr.start_t
    return tr


@dataclass
class SessionConfig:
    """Everything a session needs besides the simulated rig itself."""

    mode: str = "joystick"
    screen: Screen = field(default_factory=lambda: Screen(640, 480))
    speed: int = 6               # joystick pixels per tick
    calib_duration_ms: int | None = None  # None picks the mode default
    dwell_ms: int = 2000
    trial_count: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 1 <= self.speed <= 127:
            raise ValueError("speed must be in 1..127 to fit a HID report")
        if self.dwell_ms <= 0 or self.trial_count <= 0:
            raise ValueError("dwell_ms and trial_count must be positive")
        if self.calib_duration_ms is not None and self.calib_duration_ms <= 0:
            raise ValueError("calib_duration_ms must be positive")

    def resolved_calib_ms(self, mode: str | None = None) -> int:
        if self.calib_duration_ms is not None:
            return self.calib_duration_ms
        return _CALIB_DEFAULT_MS[mode or self.mode]
