"""Per-trial performance metrics and their aggregation over difficulty.

ID = D / W, PE = D / P, TP = ID / MT with MT in seconds.  Summaries bin
successful trials by ID with equal-width bins over the observed range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TrialRecord:
    d_px: float
    w_px: float
    mt_ms: float
    p_px: float
    success: bool


def index_of_difficulty(d: float, w: float) -> float:
    if w <= 0:
        raise ValueError("target width must be positive")
    return d / w


def path_efficiency(d: float, p: float) -> float:
    if p <= 0:
        raise ValueError("path length must be positive")
    return d / p


def throughput(id_value: float, mt_ms: float) -> float:
    """Difficulty completed per second of movement time."""
    if mt_ms <= 0:
        raise ValueError("movement time must be positive")
    return id_value / (mt_ms / 1000.0)


@dataclass(frozen=True)
class SummaryRow:
    id_lo: float
    id_hi: float
    mean_pe: float
    mean_tp: float
    n: int


def summarize(records, bins: int = 8) -> list[SummaryRow]:
    """Bin successful trials by ID and average PE and TP per populated bin."""
    if bins <= 0:
        raise ValueError("bins must be positive")
    rows = [r for r in records if r.success]
    if not rows:
        raise ValueError("no successful trials to summarize")
    ids = [index_of_difficulty(r.d_px, r.w_px) for r in rows]
    lo, hi = min(ids), max(ids)
    width = (hi - lo) / bins
    grouped: dict[int, list[tuple[float, TrialRecord]]] = {}
    for id_value, rec in zip(ids, rows):
        if width == 0.0:
            idx = 0
        else:
            idx = min(int((id_value - lo) / width), bins - 1)
        grouped.setdefault(idx, []).append((id_value, rec))
    out = []
    for idx in sorted(grouped):
        members = grouped[idx]
        pes = [path_efficiency(r.d_px, r.p_px) for _, r in members]
        tps = [throughput(i, r.mt_ms) for i, r in members]
        out.append(
            SummaryRow(
                id_lo=lo + idx * width,
                id_hi=hi if width == 0.0 else lo + (idx + 1) * width,
                # fsum: exactly rounded, so the mean is order-independent
                mean_pe=math.fsum(pes) / len(pes),
                mean_tp=math.fsum(tps) / len(tps),
                n=len(members),
            )
        )
    return out
