"""HID boot-protocol mouse reports.

Three bytes: button bitfield, then signed 8-bit dx and dy with positive
dy pointing down.  Displacements are limited to -127..+127 so every
report's negation is also encodable; -128 is never produced or
accepted.  Larger moves are split greedily into several reports whose
deltas sum exactly to the total displacement.
"""

from __future__ import annotations

import struct
from typing import NamedTuple

from .errors import ReportRangeError

REPORT_LEN = 3
DELTA_MIN = -127
DELTA_MAX = 127
BUTTONS_MASK = 0x07  # bit0 left, bit1 right, bit2 middle; bits 3..7 zero


class HidReport(NamedTuple):
    buttons: int
    dx: int
    dy: int


def encode_report(buttons: int, dx: int, dy: int) -> bytes:
    if buttons & ~BUTTONS_MASK:
        raise ReportRangeError(f"buttons must fit bits 0..2, got {buttons:#04x}")
    if not DELTA_MIN <= dx <= DELTA_MAX:
        raise ReportRangeError(f"dx out of range [-127, 127]: {dx}")
    if not DELTA_MIN <= dy <= DELTA_MAX:
        raise ReportRangeError(f"dy out of range [-127, 127]: {dy}")
    return struct.pack("<Bbb", buttons, dx, dy)


def decode_report(data: bytes) -> HidReport:
    if len(data) != REPORT_LEN:
        raise ReportRangeError(f"report must be {REPORT_LEN} bytes, got {len(data)}")
    buttons, dx, dy = struct.unpack("<Bbb", data)
    if buttons & ~BUTTONS_MASK:
        raise ReportRangeError(f"reserved button bits set: {buttons:#04x}")
    if dx == -128 or dy == -128:
        raise ReportRangeError("-128 displacement is reserved")
    return HidReport(buttons=buttons, dx=dx, dy=dy)


def _clip(v: int) -> int:
    return min(max(v, DELTA_MIN), DELTA_MAX)


def deltas_from_positions(prev, nxt) -> list[tuple[int, int]]:
    """Split the move between two cursor positions into reportable deltas.

    Positions are rounded to whole pixels first.  Returns an empty list
    when nothing moved.
    """
    dx = int(round(nxt.x)) - int(round(prev.x))
    dy = int(round(nxt.y)) - int(round(prev.y))
    out: list[tuple[int, int]] = []
    while dx != 0 or dy != 0:
        step_x = _clip(dx)
        step_y = _clip(dy)
        out.append((step_x, step_y))
        dx -= step_x
        dy -= step_y
    return out
