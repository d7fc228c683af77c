"""Simulated dual IR reflectance sensor pair.

Two IR LED / photodetector pairs sit on a collar deck aimed at the sides
of the chin.  Head pose sets the chin-to-sensor distances, reflected
intensity falls off with the square of distance, and an 8-bit ADC
digitizes each channel once per sampling period.  Counts are normalized
so 0..255 spans the full sensing range of 0.2 to 4.0 inches: closer
chin, stronger reflection, larger count.

Pitching down shortens both distances.  Yawing right moves the chin off
the left sensor only, so the left channel weakens while the right one
holds; yawing left mirrors that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import TraceFormatError

PITCH_RANGE_DEG = (-45.0, 45.0)
YAW_RANGE_DEG = (-60.0, 60.0)

TRACE_HEADER = "t_ms,s1,s2"


def _clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


@dataclass(frozen=True)
class HeadPose:
    """Head orientation in degrees; out-of-range input is clamped, never rejected."""

    pitch_deg: float = 0.0  # positive tilts the chin down
    yaw_deg: float = 0.0    # positive turns the face right

    def __post_init__(self):
        object.__setattr__(self, "pitch_deg", _clamp(float(self.pitch_deg), *PITCH_RANGE_DEG))
        object.__setattr__(self, "yaw_deg", _clamp(float(self.yaw_deg), *YAW_RANGE_DEG))


@dataclass(frozen=True)
class SensorGeometry:
    """Linear pose-to-distance model plus the sensing range of the optics."""

    rest_distance_in: float = 1.5
    pitch_gain_in_per_deg: float = 0.03
    yaw_gain_in_per_deg: float = 0.04
    min_distance_in: float = 0.2
    max_distance_in: float = 4.0

    def __post_init__(self):
        if not (self.min_distance_in < self.rest_distance_in < self.max_distance_in):
            raise ValueError("rest distance must lie strictly inside the sensing range")
        if self.pitch_gain_in_per_deg <= 0 or self.yaw_gain_in_per_deg <= 0:
            raise ValueError("pose gains must be positive")


@dataclass(frozen=True)
class SamplingSchedule:
    """LED pulse timing; pulse_ms is configuration metadata, not simulated."""

    period_ms: int = 50
    pulse_ms: int = 1

    def __post_init__(self):
        if not 0 < self.pulse_ms < self.period_ms:
            raise ValueError("pulse must be shorter than the sampling period")

    @property
    def duty_cycle(self) -> float:
        return self.pulse_ms / self.period_ms


@dataclass(frozen=True)
class NoiseModel:
    """Additive channel noise: constant ambient offset plus Gaussian jitter."""

    ambient_offset: float = 0.0
    gaussian_sigma: float = 1.5
    seed: int = 0

    def __post_init__(self):
        if self.gaussian_sigma < 0:
            raise ValueError("gaussian_sigma must be non-negative")

    def make_rng(self) -> random.Random:
        return random.Random(self.seed)


@dataclass(frozen=True)
class SensorFrame:
    t_ms: int
    s1: int  # left sensor, 0..255
    s2: int  # right sensor, 0..255


def pose_to_distances(pose: HeadPose, geom: SensorGeometry) -> tuple[float, float]:
    """Map head pose to the two chin distances in inches.

    Pitch-down shortens both channels; yaw-right lengthens only the left
    sensor's path (d1), yaw-left only the right sensor's (d2).
    """
    base = geom.rest_distance_in - geom.pitch_gain_in_per_deg * pose.pitch_deg
    d1 = base + geom.yaw_gain_in_per_deg * max(pose.yaw_deg, 0.0)
    d2 = base + geom.yaw_gain_in_per_deg * max(-pose.yaw_deg, 0.0)
    lo, hi = geom.min_distance_in, geom.max_distance_in
    return _clamp(d1, lo, hi), _clamp(d2, lo, hi)


def distance_to_adc(d: float, geom: SensorGeometry) -> int:
    """Digitize one distance: inverse-square intensity normalized over the range."""
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    inv_max = geom.max_distance_in ** -2
    inv_min = geom.min_distance_in ** -2
    ratio = _clamp((d ** -2 - inv_max) / (inv_min - inv_max), 0.0, 1.0)
    return int(round(255.0 * ratio))


def sample_frame(
    pose: HeadPose,
    t_ms: int,
    geom: SensorGeometry,
    noise: NoiseModel,
    rng: random.Random,
) -> SensorFrame:
    """Produce one ADC frame for the given pose at time t_ms.

    Draws one Gaussian per channel (s1 first) so a fixed seed and call
    order reproduce the frame sequence exactly.
    """
    d1, d2 = pose_to_distances(pose, geom)
    counts = []
    for d in (d1, d2):
        level = float(distance_to_adc(d, geom)) + noise.ambient_offset
        if noise.gaussian_sigma > 0:
            level += rng.gauss(0.0, noise.gaussian_sigma)
        counts.append(int(_clamp(round(level), 0, 255)))
    return SensorFrame(t_ms=t_ms, s1=counts[0], s2=counts[1])


def trace_encode(frames) -> str:
    """Serialize frames as the trace CSV (header t_ms,s1,s2, one frame per row)."""
    lines = [TRACE_HEADER]
    lines.extend(f"{f.t_ms},{f.s1},{f.s2}" for f in frames)
    return "\n".join(lines) + "\n"


def trace_decode(text: str) -> list[SensorFrame]:
    """Parse a trace file, rejecting malformed rows with their line number."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != TRACE_HEADER:
        raise TraceFormatError(f"bad header, line 1: expected {TRACE_HEADER!r}")
    frames: list[SensorFrame] = []
    prev_t = None
    for idx, line in enumerate(lines[1:], start=2):
        parts = line.rstrip("\r").split(",")
        if len(parts) != 3:
            raise TraceFormatError(f"malformed row, line {idx}: expected 3 fields")
        try:
            t_ms, s1, s2 = (int(p) for p in parts)
        except ValueError:
            raise TraceFormatError(f"malformed row, line {idx}: integers required") from None
        if not 0 <= s1 <= 255:
            raise TraceFormatError(f"s1 out of range, line {idx}")
        if not 0 <= s2 <= 255:
            raise TraceFormatError(f"s2 out of range, line {idx}")
        if prev_t is not None and t_ms <= prev_t:
            raise TraceFormatError(f"timestamp not increasing, line {idx}")
        prev_t = t_ms
        frames.append(SensorFrame(t_ms=t_ms, s1=s1, s2=s2))
    return frames
