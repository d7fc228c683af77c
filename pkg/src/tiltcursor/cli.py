"""Command-line entry points: serve, replay, scripted, analyze."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import logs
from .engine import ReplayError, SessionEngine, replay_frames
from .errors import TraceFormatError
from .metrics import summarize
from .scripted import DEFAULT_TRIAL_TIMEOUT_MS, scripted_run
from .sensors import NoiseModel, trace_decode
from .session import Screen, SessionConfig


def _screen_arg(text: str) -> Screen:
    try:
        w, h = text.lower().split("x")
        return Screen(int(w), int(h))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"screen must look like 640x480, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiltcursor", description="Head-tilt cursor control gateway")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mode", choices=("joystick", "direct"), default="joystick")
        p.add_argument("--screen", type=_screen_arg, default=Screen(640, 480))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--speed", type=int, default=6)
        p.add_argument("--dwell-ms", type=int, default=2000)
        p.add_argument("--calib-ms", type=int, default=None)
        p.add_argument("--trials", type=int, default=50)
        p.add_argument("--out-dir", type=Path, default=Path("."))

    p_serve = sub.add_parser("serve", help="run the gateway service for the UI")
    common(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8772)
    p_serve.add_argument("--noise-sigma", type=float, default=1.5)
    p_serve.add_argument("--ui-dir", type=Path, default=None, help="static bundle; default frontend/dist if present")

    p_replay = sub.add_parser("replay", help="drive a recorded sensor trace through the pipeline")
    p_replay.add_argument("trace", type=Path)
    common(p_replay)
    p_replay.add_argument("--timeout-ms", type=int, default=None)
    p_replay.add_argument("--snapshot", type=Path, default=None, help="reuse a saved calibration")

    p_scripted = sub.add_parser("scripted", help="run seeded closed-loop trials headlessly")
    common(p_scripted)
    p_scripted.add_argument("--modes", choices=("joystick", "direct", "both"), default=None,
                            help="overrides --mode; 'both' runs one session per mode")
    p_scripted.add_argument("--timeout-ms", type=int, default=DEFAULT_TRIAL_TIMEOUT_MS)

    p_analyze = sub.add_parser("analyze", help="summarize a trial CSV by index of difficulty")
    p_analyze.add_argument("trials_csv", type=Path)
    p_analyze.add_argument("--bins", type=int, default=8)
    p_analyze.add_argument("--out", type=Path, default=None)
    return parser


def _config_from_args(args, mode: str | None = None) -> SessionConfig:
    return SessionConfig(
        mode=mode or args.mode,
        screen=args.screen,
        speed=args.speed,
        calib_duration_ms=args.calib_ms,
        dwell_ms=args.dwell_ms,
        trial_count=args.trials,
        seed=args.seed,
    )


def _cmd_serve(args) -> int:
    from .netio import GatewayServer

    ui_dir = args.ui_dir
    if ui_dir is None:
        default = Path("frontend/dist")
        ui_dir = default if default.is_dir() else None
    args.out_dir.mkdir(parents=True, exist_ok=True)

    def engine_factory():
        return SessionEngine(
            _config_from_args(args),
            noise=NoiseModel(gaussian_sigma=args.noise_sigma, seed=args.seed),
        )

    def on_session_end(engine):
        if engine.trial_rows:
            logs.write_trial_csv(args.out_dir / "trials_serve.csv", engine.trial_rows)
        if engine.thresholds is not None:
            logs.save_snapshot(args.out_dir / "session_snapshot.json", engine.config_dict(), engine.thresholds)

    server = GatewayServer(args.host, args.port, engine_factory, ui_dir=ui_dir, on_session_end=on_session_end)
    where = f"{server.host}:{server.port}"
    print(f"gateway listening on {where} (TCP lines, WebSocket, and static UI)")
    if ui_dir:
        print(f"serving UI from {ui_dir} at http://{where}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.close()
    return 0


def _cmd_replay(args) -> int:
    try:
        frames = trace_decode(args.trace.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return 2
    except TraceFormatError as exc:
        print(f"trace decode failed: {exc}", file=sys.stderr)
        return 2
    args.out_dir.mkdir(parents=True, exist_ok=True)
    traj_path = args.out_dir / "trajectory.csv"
    trials_path = args.out_dir / "trials.csv"
    if not frames:
        logs.write_trajectory_csv(traj_path, [])
        logs.write_trial_csv(trials_path, [])
        print("warning: empty trace, wrote empty outputs", file=sys.stderr)
        return 0
    thresholds = None
    config = _config_from_args(args)
    if args.snapshot is not None:
        try:
            _cfg, thresholds = logs.load_snapshot(args.snapshot)
        except (OSError, ValueError) as exc:
            print(f"cannot load snapshot: {exc}", file=sys.stderr)
            return 2
    try:
        engine = replay_frames(frames, config, thresholds=thresholds, timeout_ms=args.timeout_ms)
    except ReplayError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return 2
    logs.write_trajectory_csv(traj_path, engine.trajectory)
    logs.write_trial_csv(trials_path, engine.trial_rows)
    print(f"wrote {traj_path} and {trials_path} ({len(engine.trial_rows)} trials)")
    return 0


def _cmd_scripted(args) -> int:
    modes = [args.mode]
    if args.modes == "both":
        modes = ["joystick", "direct"]
    elif args.modes:
        modes = [args.modes]
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for mode in modes:
        engine = scripted_run(_config_from_args(args, mode), timeout_ms=args.timeout_ms)
        path = args.out_dir / f"trials_{mode}.csv"
        logs.write_trial_csv(path, engine.trial_rows)
        ok = sum(r.success for r in engine.trial_rows)
        print(f"{mode}: {ok}/{len(engine.trial_rows)} trials succeeded -> {path}")
    return 0


def _cmd_analyze(args) -> int:
    try:
        records = logs.read_trial_csv(args.trials_csv)
    except OSError as exc:
        print(f"cannot read trials: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"bad trial CSV: {exc}", file=sys.stderr)
        return 2
    try:
        rows = summarize(records, bins=args.bins)
    except ValueError as exc:
        print(f"cannot summarize: {exc}", file=sys.stderr)
        return 2
    print(logs.SUMMARY_HEADER)
    for r in rows:
        print(f"{r.id_lo:.6f},{r.id_hi:.6f},{r.mean_pe:.6f},{r.mean_tp:.6f},{r.n}")
    if args.out is not None:
        logs.write_summary_csv(args.out, rows)
        print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "replay": _cmd_replay,
        "scripted": _cmd_scripted,
        "analyze": _cmd_analyze,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
