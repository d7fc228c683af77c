"""Flat-file formats: trial logs, metric summaries, trajectories, snapshots.

All writers emit LF newlines and fixed decimal formats so identical
sessions produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .directmap import DirectThresholds
from .engine import TrialRow
from .joystick import JoystickThresholds
from .metrics import SummaryRow, TrialRecord

TRIAL_HEADER = "trial,mode,D_px,W_px,MT_ms,P_px,success"
SUMMARY_HEADER = "id_bin_lo,id_bin_hi,mean_pe,mean_tp,n"
TRAJECTORY_HEADER = "t_ms,x,y"


def format_trial_csv(rows: list[TrialRow]) -> str:
    lines = [TRIAL_HEADER]
    for r in rows:
        lines.append(
            f"{r.trial},{r.mode},{r.d_px:.3f},{r.w_px},{r.mt_ms},{r.p_px:.3f},{int(r.success)}"
        )
    return "\n".join(lines) + "\n"


def write_trial_csv(path: str | Path, rows: list[TrialRow]) -> None:
    Path(path).write_text(format_trial_csv(rows), encoding="utf-8")


def read_trial_csv(path: str | Path) -> list[TrialRecord]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != TRIAL_HEADER:
        raise ValueError(f"bad trial CSV header, expected {TRIAL_HEADER!r}")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise ValueError(f"bad trial CSV row: {ln!r}")
        records.append(
            TrialRecord(
                d_px=float(parts[2]),
                w_px=float(parts[3]),
                mt_ms=float(parts[4]),
                p_px=float(parts[5]),
                success=parts[6] == "1",
            )
        )
    return records


def format_summary_csv(rows: list[SummaryRow]) -> str:
    lines = [SUMMARY_HEADER]
    for r in rows:
        lines.append(f"{r.id_lo:.6f},{r.id_hi:.6f},{r.mean_pe:.6f},{r.mean_tp:.6f},{r.n}")
    return "\n".join(lines) + "\n"


def write_summary_csv(path: str | Path, rows: list[SummaryRow]) -> None:
    Path(path).write_text(format_summary_csv(rows), encoding="utf-8")


def format_trajectory_csv(points: list[tuple[int, float, float]]) -> str:
    # Full-precision floats so a path length recomputed from the log
    # matches the session's accumulation exactly.
    lines = [TRAJECTORY_HEADER]
    for t_ms, x, y in points:
        lines.append(f"{t_ms},{x!r},{y!r}")
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path: str | Path, points: list[tuple[int, float, float]]) -> None:
    Path(path).write_text(format_trajectory_csv(points), encoding="utf-8")


def save_snapshot(path: str | Path, config_dict: dict, thresholds) -> None:
    """One text document holding the session config and frozen calibration."""
    doc = {"config": config_dict, "thresholds": None}
    if thresholds is not None:
        doc["thresholds"] = {
            "kind": "direct" if isinstance(thresholds, DirectThresholds) else "joystick",
            **thresholds.as_dict(),
        }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_snapshot(path: str | Path) -> tuple[dict, object | None]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    thresholds = None
    th = doc.get("thresholds")
    if th:
        kind = th.pop("kind", None)
        if kind == "direct":
            thresholds = DirectThresholds.from_dict(th)
        elif kind == "joystick":
            thresholds = JoystickThresholds.from_dict(th)
        else:
            raise ValueError(f"unknown thresholds kind: {kind!r}")
    return doc.get("config", {}), thresholds
