import random

import pytest

from tiltcursor.directmap import (
    DirectCalibrator,
    DirectThresholds,
    Screen,
    calibrate_direct,
    map_x,
    map_x_left,
    map_x_right,
    map_y,
)
from tiltcursor.errors import CalibrationError, DegenerateThresholdError
from tiltcursor.filtering import FilteredFrame


def ff(t_ms, f1, f2):
    return FilteredFrame(t_ms=t_ms, f1=f1, f2=f2)


def sweep_frames(rest=100):
    """Step sweep: rest, up (40,40), down (200,200), left (180,60), right (60,180)."""
    phases = (
        [(rest, rest)] * 3
        + [(40, 40)] * 4
        + [(200, 200)] * 4
        + [(rest, rest)] * 2
        + [(180, 60)] * 4
        + [(rest, rest)] * 2
        + [(60, 180)] * 4
    )
    return [ff(i * 50, a, b) for i, (a, b) in enumerate(phases)]


# Hand trace of the update rules on the step sweep above: each extreme
# fires its rule exactly once (strict inequalities freeze repeats), and
# no pose triggers a foreign rule.
EXPECTED = DirectThresholds(u1=40, d1=200, l1=180, r1=60, u2=40, d2=200, l2=60, r2=180)


def test_sweep_learns_all_extremes():
    th = calibrate_direct(sweep_frames())
    assert th == EXPECTED


def test_update_counts_diagnostic():
    cal = DirectCalibrator()
    for f in sweep_frames():
        cal.update(f)
    assert all(n >= 1 for n in cal.update_counts.values())
    cal.result()  # no error


def test_constant_input_is_incomplete():
    frames = [ff(i * 50, 100, 100) for i in range(80)]
    with pytest.raises(CalibrationError):
        calibrate_direct(frames)


def test_missing_left_named():
    phases = [(100, 100)] * 3 + [(40, 40)] * 4 + [(200, 200)] * 4 + [(100, 100)] * 2 + [(60, 180)] * 4
    frames = [ff(i * 50, a, b) for i, (a, b) in enumerate(phases)]
    with pytest.raises(CalibrationError, match="left") as err:
        calibrate_direct(frames)
    assert "left" in err.value.missing


def test_empty_window_errors():
    with pytest.raises(CalibrationError):
        calibrate_direct([])


def test_calibration_window_cutoff():
    # frames past the window must not update thresholds
    frames = sweep_frames() + [ff(10_000, 255, 255)]
    th = calibrate_direct(frames, duration_ms=4000)
    assert th.d1 == 200


SCREEN = Screen(1920, 1080)


def test_map_y_top_border_at_up_extreme():
    assert map_y(40, 40, EXPECTED, SCREEN) == 0.0


def test_map_y_midpoint():
    # S = (U + D) / 2 lands mid-screen
    assert map_y(120, 120, EXPECTED, SCREEN) == pytest.approx(540.0)


def test_map_y_direct_substitution():
    th = DirectThresholds(u1=80, d1=180, l1=1, r1=0, u2=80, d2=180, l2=0, r2=1)
    assert map_y(130, 130, th, Screen(1920, 1080)) == pytest.approx(540.0)


def test_map_y_degenerate():
    th = DirectThresholds(u1=5, d1=5, l1=1, r1=0, u2=5, d2=5, l2=0, r2=1)
    with pytest.raises(DegenerateThresholdError):
        map_y(100, 100, th, SCREEN)


def test_map_x_center_from_both_branches():
    assert map_x(100, 100, EXPECTED, SCREEN) == 960.0
    assert map_x_left(100, 100, EXPECTED, SCREEN) == 960.0
    assert map_x_right(100, 100, EXPECTED, SCREEN) == 960.0


def test_map_x_left_border_at_extreme():
    # f1 - f2 equals the calibrated left difference
    assert map_x(180, 60, EXPECTED, SCREEN) == 0.0


def test_map_x_right_border_at_extreme():
    assert map_x(60, 180, EXPECTED, SCREEN) == 1920.0


def test_map_x_example_substitution():
    th = DirectThresholds(u1=0, d1=1, l1=180, r1=60, u2=0, d2=1, l2=60, r2=180)
    assert map_x(160, 100, th, SCREEN) == pytest.approx(480.0)


def test_map_x_degenerate_branch_only():
    th = DirectThresholds(u1=0, d1=1, l1=50, r1=60, u2=0, d2=1, l2=50, r2=180)
    with pytest.raises(DegenerateThresholdError):
        map_x(120, 40, th, SCREEN)  # left branch selected, l1 == l2
    assert map_x(40, 120, th, SCREEN) > 0  # right branch still fine


def test_maps_clamped_for_wild_inputs():
    rng = random.Random(3)
    for _ in range(5000):
        f1 = rng.uniform(-100, 400)
        f2 = rng.uniform(-100, 400)
        x = map_x(f1, f2, EXPECTED, SCREEN)
        y = map_y(f1, f2, EXPECTED, SCREEN)
        assert 0.0 <= x <= SCREEN.xaxis
        assert 0.0 <= y <= SCREEN.yaxis


def test_x_monotone_in_f1():
    rng = random.Random(9)
    for _ in range(500):
        f2 = rng.uniform(0, 255)
        xs = [map_x(f1, f2, EXPECTED, SCREEN) for f1 in range(0, 256, 5)]
        assert all(a >= b for a, b in zip(xs, xs[1:]))


def test_y_monotone_in_mean():
    ys = [map_y(v, v, EXPECTED, SCREEN) for v in range(0, 256)]
    assert all(a <= b for a, b in zip(ys, ys[1:]))


def test_continuity_at_center_seam():
    rng = random.Random(21)
    for _ in range(300):
        f = rng.uniform(0, 255)
        assert abs(map_x_left(f, f, EXPECTED, SCREEN) - map_x_right(f, f, EXPECTED, SCREEN)) < 1e-9


def test_screen_validation():
    with pytest.raises(ValueError):
        Screen(0, 100)


def test_thresholds_dict_roundtrip():
    assert DirectThresholds.from_dict(EXPECTED.as_dict()) == EXPECTED
