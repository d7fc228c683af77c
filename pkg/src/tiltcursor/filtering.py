"""Moving-average smoothing of raw sensor frames.

Every consumer downstream (both cursor modes and their calibrations)
reads filtered levels, never raw counts.  Sums are kept as integers and
divided at read time, so the incremental filter matches a naive
recompute of the window mean exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .sensors import SensorFrame

DEFAULT_WINDOW = 15


@dataclass(frozen=True)
class FilteredFrame:
    t_ms: int
    f1: float
    f2: float


class MovingAverageFilter:
    """Streaming mean of the last `window_len` raw samples per channel.

    During warm-up (fewer samples than the window) the mean is taken
    over whatever has arrived, so calibration can start immediately.
    """

    def __init__(self, window_len: int = DEFAULT_WINDOW):
        if window_len <= 0:
            raise ValueError("window_len must be a positive integer")
        self.window_len = window_len
        self._buf: deque[tuple[int, int]] = deque()
        self._sum1 = 0
        self._sum2 = 0

    def __len__(self) -> int:
        return len(self._buf)

    @property
    def sums(self) -> tuple[int, int]:
        return self._sum1, self._sum2

    @property
    def window(self) -> tuple[tuple[int, int], ...]:
        return tuple(self._buf)

    def reset(self) -> None:
        self._buf.clear()
        self._sum1 = 0
        self._sum2 = 0

    def step(self, frame: SensorFrame) -> FilteredFrame:
        self._buf.append((frame.s1, frame.s2))
        self._sum1 += frame.s1
        self._sum2 += frame.s2
        if len(self._buf) > self.window_len:
            old1, old2 = self._buf.popleft()
            self._sum1 -= old1
            self._sum2 -= old2
        n = len(self._buf)
        return FilteredFrame(t_ms=frame.t_ms, f1=self._sum1 / n, f2=self._sum2 / n)
