import random
from pathlib import Path

import pytest

from tiltcursor import logs
from tiltcursor.metrics import (
    TrialRecord,
    index_of_difficulty,
    path_efficiency,
    summarize,
    throughput,
)

DATA = Path(__file__).parent / "data"


def rec(d, w, mt, p, success=True):
    return TrialRecord(d_px=d, w_px=w, mt_ms=mt, p_px=p, success=success)


def test_id_examples():
    assert index_of_difficulty(400, 80) == 5.0
    assert index_of_difficulty(250, 250) == 1.0
    with pytest.raises(ValueError):
        index_of_difficulty(100, 0)


def test_pe_examples():
    assert path_efficiency(300, 300) == 1.0
    assert path_efficiency(300, 600) == 0.5
    with pytest.raises(ValueError):
        path_efficiency(300, 0)


def test_tp_examples():
    assert throughput(5, 2500) == 2.0
    assert throughput(1, 1000) == 1.0
    with pytest.raises(ValueError):
        throughput(5, 0)


def test_unit_consistency():
    assert index_of_difficulty(800, 160) == index_of_difficulty(400, 80)
    assert throughput(5, 5000) == throughput(5, 2500) / 2


def test_summarize_identical_records():
    records = [rec(400, 80, 2000, 500)] * 50
    rows = summarize(records, bins=8)
    assert len(rows) == 1
    assert rows[0].n == 50
    assert rows[0].mean_pe == pytest.approx(0.8)
    assert rows[0].mean_tp == pytest.approx(2.5)


def test_summarize_extremes_in_first_and_last_bins():
    records = [rec(100, 100, 1000, 200), rec(900, 100, 1000, 1000)]  # ID 1 and 9
    rows = summarize(records, bins=8)
    assert len(rows) == 2
    assert rows[0].id_lo == pytest.approx(1.0)
    assert rows[-1].id_hi == pytest.approx(9.0)
    assert rows[0].n == rows[-1].n == 1


def test_summarize_excludes_failures_and_errors_when_empty():
    records = [rec(100, 50, 1000, 200, success=False)]
    with pytest.raises(ValueError):
        summarize(records)
    mixed = records + [rec(100, 50, 1000, 200, success=True)]
    rows = summarize(mixed)
    assert sum(r.n for r in rows) == 1


def test_summarize_permutation_invariant():
    rng = random.Random(2)
    records = [
        rec(rng.uniform(100, 800), rng.uniform(40, 160), rng.uniform(500, 9000), rng.uniform(150, 2000))
        for _ in range(200)
    ]
    rows_a = summarize(records, bins=6)
    shuffled = records[:]
    rng.shuffle(shuffled)
    rows_b = summarize(shuffled, bins=6)
    assert rows_a == rows_b


def test_golden_summary_regression():
    # frozen scripted-user run: re-summarizing its trial log must match
    records = logs.read_trial_csv(DATA / "golden_trials_seed7.csv")
    rows = summarize(records, bins=8)
    assert logs.format_summary_csv(rows) == (DATA / "golden_summary_seed7.csv").read_text()


def test_trial_csv_roundtrip(tmp_path):
    from tiltcursor.engine import TrialRow

    rows = [
        TrialRow(trial=1, mode="joystick", d_px=352.537, w_px=57, mt_ms=4550, p_px=402.0, success=True),
        TrialRow(trial=2, mode="joystick", d_px=100.0, w_px=40, mt_ms=1000, p_px=120.25, success=False),
    ]
    path = tmp_path / "t.csv"
    logs.write_trial_csv(path, rows)
    back = logs.read_trial_csv(path)
    assert back[0].d_px == 352.537
    assert back[0].success is True
    assert back[1].p_px == 120.25
    assert back[1].success is False


def test_trial_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("nope\n1,2,3\n")
    with pytest.raises(ValueError):
        logs.read_trial_csv(path)
