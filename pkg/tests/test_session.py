import math
import random

import pytest

from tiltcursor.directmap import Screen
from tiltcursor.joystick import CursorDelta
from tiltcursor.session import (
    CursorState,
    SessionConfig,
    Target,
    apply_delta,
    begin_trial,
    gen_target,
    set_absolute,
    trial_tick,
)

SCREEN = Screen(1920, 1080)


def cur(x, y, screen=SCREEN):
    return CursorState(x, y, screen)


def test_apply_delta_clamps_at_border():
    c = apply_delta(cur(0, 0), CursorDelta(-1, 0))
    assert (c.x, c.y) == (0.0, 0.0)


def test_apply_delta_interior():
    c = apply_delta(cur(100, 100), CursorDelta(1, 0))
    assert (c.x, c.y) == (101.0, 100.0)


def test_apply_delta_clamps_one_axis():
    c = apply_delta(cur(1920, 540), CursorDelta(1, 1))
    assert (c.x, c.y) == (1920.0, 541.0)


def test_set_absolute_clamps():
    assert (set_absolute(cur(0, 0), -5, 50).x, set_absolute(cur(0, 0), -5, 50).y) == (0.0, 50.0)
    c = set_absolute(cur(0, 0), 960, 540)
    assert (c.x, c.y) == (960.0, 540.0)
    c = set_absolute(cur(0, 0), 5000, 5000)
    assert (c.x, c.y) == (1920.0, 1080.0)


def test_cursor_never_leaves_screen_under_fuzz():
    rng = random.Random(6)
    c = cur(960, 540)
    for _ in range(20_000):
        if rng.random() < 0.5:
            c = apply_delta(c, CursorDelta(rng.randint(-200, 200), rng.randint(-200, 200)))
        else:
            c = set_absolute(c, rng.uniform(-4000, 4000), rng.uniform(-4000, 4000))
        assert 0.0 <= c.x <= 1920.0
        assert 0.0 <= c.y <= 1080.0


def test_gen_target_golden_sequence():
    rng = random.Random(42)
    screen = Screen(640, 480)
    cursor = CursorState(320, 240, screen)
    got = [gen_target(rng, screen, cursor) for _ in range(3)]
    assert got == [
        Target(cx=175, cy=73, w=121),
        Target(cx=181, cy=138, w=134),
        Target(cx=119, cy=413, w=134),
    ]


def test_gen_target_constraints_hold():
    rng = random.Random(17)
    screen = Screen(640, 480)
    cursor = CursorState(100, 400, screen)
    for _ in range(10_000):
        t = gen_target(rng, screen, cursor)
        assert t.cx - t.w / 2 >= 0 and t.cx + t.w / 2 <= screen.xaxis
        assert t.cy - t.w / 2 >= 0 and t.cy + t.w / 2 <= screen.yaxis
        assert math.hypot(t.cx - cursor.x, t.cy - cursor.y) > t.w


def test_gen_target_screen_too_small():
    rng = random.Random(0)
    with pytest.raises(ValueError):
        gen_target(rng, Screen(100, 100), CursorState(50, 50, Screen(100, 100)))


def test_trial_success_mt_excludes_dwell():
    target = Target(cx=500, cy=500, w=100)
    tr = begin_trial(target, cur(0, 0), t_ms=1000, dwell_ms=2000)
    trial_tick(tr, cur(400, 400), 2000)  # outside
    trial_tick(tr, cur(500, 500), 3000)  # enters
    trial_tick(tr, cur(510, 505), 4000)
    assert tr.status == "running"
    trial_tick(tr, cur(505, 505), 5000)  # dwell complete
    assert tr.status == "success"
    assert tr.mt_ms == 3000 - 1000


def test_trial_dwell_resets_on_exit():
    target = Target(cx=500, cy=500, w=100)
    tr = begin_trial(target, cur(0, 0), t_ms=0, dwell_ms=2000)
    trial_tick(tr, cur(500, 500), 3000)  # enter
    trial_tick(tr, cur(700, 700), 4000)  # exit
    assert tr.dwell_start is None
    trial_tick(tr, cur(500, 500), 6000)  # re-enter
    trial_tick(tr, cur(500, 500), 7000)
    assert tr.status == "running"
    trial_tick(tr, cur(500, 500), 8000)
    assert tr.status == "success"
    assert tr.mt_ms == 6000


def test_trial_never_succeeds_without_entry():
    target = Target(cx=500, cy=500, w=40)
    tr = begin_trial(target, cur(0, 0), t_ms=0)
    for t in range(1000, 100_000, 50):
        trial_tick(tr, cur(100, 100), t)
    assert tr.status == "running"


def test_trial_inside_test_is_square():
    target = Target(cx=100, cy=100, w=40)
    assert target.contains(120, 120)       # corner of the square
    assert not target.contains(121, 100)
    assert not target.contains(100, 79.9)


def test_path_accumulation_matches_brute_force():
    rng = random.Random(77)
    target = Target(cx=5000, cy=5000, w=10)  # unreachable, keep running
    screen = Screen(10_000, 10_000)
    positions = [CursorState(rng.uniform(0, 1000), rng.uniform(0, 1000), screen) for _ in range(500)]
    tr = begin_trial(target, positions[0], t_ms=0)
    for i, c in enumerate(positions[1:], start=1):
        trial_tick(tr, c, i * 50)
    expected = 0.0
    for a, b in zip(positions, positions[1:]):
        expected += math.hypot(b.x - a.x, b.y - a.y)
    assert tr.path_len_px == expected


def test_success_is_frozen():
    target = Target(cx=10, cy=10, w=40)
    tr = begin_trial(target, cur(10, 10, Screen(100, 100)), t_ms=0, dwell_ms=100)
    trial_tick(tr, cur(10, 10, Screen(100, 100)), 50)
    trial_tick(tr, cur(10, 10, Screen(100, 100)), 200)
    assert tr.status == "success"
    p = tr.path_len_px
    trial_tick(tr, cur(90, 90, Screen(100, 100)), 300)
    assert tr.path_len_px == p


def test_session_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(mode="gesture")
    with pytest.raises(ValueError):
        SessionConfig(speed=0)
    with pytest.raises(ValueError):
        SessionConfig(speed=500)
    cfg = SessionConfig()
    assert cfg.resolved_calib_ms() == 100
    assert cfg.resolved_calib_ms("direct") == 4000
    assert SessionConfig(calib_duration_ms=700).resolved_calib_ms() == 700
