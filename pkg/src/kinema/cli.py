"""Command-line front door.

Subcommands: ``filter`` (run the motion filter over a trajectory), ``validate``
(trajectory-helper report), ``ghost`` (corrected shadow trajectory), ``run``
(execute an animation program), ``serve`` (TCP live-session server), ``api``
(HTTP/WebSocket service).

Exit codes: 0 ok, 1 violations found, 2 usage error, 3 bad input data,
4 environment failure (e.g. port busy).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Optional

from kinema.anim import load_clip, sample_curve
from kinema.embodiment import load_embodiment
from kinema.engine import Engine, compile_program, frame_to_json, run_program
from kinema.errors import KinemaError
from kinema.filters import FilterParams, run
from kinema.presets import get_preset, is_preset, params_from_text, preset_names
from kinema.signals import (
    INPUT_PRESETS,
    input_preset,
    read_trajectory_csv,
    write_output_csv,
)
from kinema.validator import check_trajectory, ghost, violations_to_jsonl

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_ENV = 4


class UsageError(Exception):
    """Bad flag value; exits with the usage status, naming the flag."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise KinemaError(f"cannot read {path}: {exc}") from None


def _write_out(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_params(value: str, rate: float) -> FilterParams:
    if is_preset(value):
        return get_preset(value, rate)
    if Path(value).exists():
        from dataclasses import replace

        return replace(params_from_text(_read(value)), sample_rate=rate)
    raise UsageError(
        f"--params {value!r} is neither a preset ({', '.join(preset_names())}) "
        "nor a readable file"
    )


def cmd_filter(args: argparse.Namespace) -> int:
    params = _load_params(args.params, args.rate)
    if args.input in INPUT_PRESETS:
        points = input_preset(args.input, args.duration, args.seed,
                              params.p_min, params.p_max)
    else:
        points = read_trajectory_csv(_read(args.input))
    x0 = args.x0 if args.x0 is not None else points[0][1]
    x0 = min(max(x0, params.p_min), params.p_max)
    outputs = run(params, x0, points, args.duration)
    _write_out(write_output_csv(outputs, args.rate), args.out)
    return EXIT_OK


def _clip_to_samples(clip_text: str, rate: float) -> dict[str, list[float]]:
    clip = load_clip(clip_text)
    n = max(2, round(clip.duration * rate) + 1)
    dt = 1.0 / rate
    return {
        curve.dof_name: [sample_curve(curve, i * dt) for i in range(n)]
        for curve in clip.curves
    }


def _trace_to_samples(trace_text: str) -> tuple[dict[str, list[float]], Optional[float]]:
    """Per-DoF series from an animation-frame JSON-lines stream."""
    samples: dict[str, list[float]] = {}
    dt = None
    for line in trace_text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        dt = obj.get("dt", dt)
        for name, value in obj.get("channels", {}).items():
            if isinstance(value, (int, float)):
                samples.setdefault(name, []).append(float(value))
    return samples, dt


def cmd_validate(args: argparse.Namespace) -> int:
    spec = load_embodiment(_read(args.embodiment))
    rate = args.rate
    if args.clip:
        samples = _clip_to_samples(_read(args.clip), rate)
    else:
        samples, trace_dt = _trace_to_samples(_read(args.trace))
        if trace_dt:
            rate = 1.0 / trace_dt
    violations = check_trajectory(samples, spec, rate)
    _write_out(violations_to_jsonl(violations), args.out)
    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_ghost(args: argparse.Namespace) -> int:
    spec = load_embodiment(_read(args.embodiment))
    samples = _clip_to_samples(_read(args.clip), args.rate)
    params = _load_params(args.params, args.rate)
    report = ghost(samples, spec, params, args.rate)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, outputs in report.corrected.items():
        (out_dir / f"{name}.csv").write_text(
            write_output_csv(outputs, args.rate), encoding="utf-8")
    summary = {
        "max_deviation": report.max_deviation,
        "residual_violations": len(report.residual_violations),
        "exported": sorted(report.corrected),
    }
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if not report.residual_violations else EXIT_VIOLATIONS


def cmd_run(args: argparse.Namespace) -> int:
    spec = load_embodiment(_read(args.embodiment))
    program_text = _read(args.program)
    program_obj = json.loads(program_text)
    assets = {}
    if isinstance(program_obj, dict):
        base = Path(args.program).parent
        for name, rel in (program_obj.pop("clips", None) or {}).items():
            assets[name] = load_clip(_read(str(base / rel)))
        program_text = json.dumps(program_obj)
    program = compile_program(program_text, spec, assets, args.rate)
    engine = Engine(spec, program)
    scripted = json.loads(_read(args.inputs)) if args.inputs else []
    frames = run_program(engine, args.rate, args.duration, scripted)
    lines = "".join(frame_to_json(frame, t) + "\n" for t, frame in frames)
    _write_out(lines, args.out)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from kinema.service.tcp import serve_sessions

    try:
        asyncio.run(serve_sessions(args.port, args.rate, args.host, args.turbo))
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_ENV
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_api(args: argparse.Namespace) -> int:
    import uvicorn

    from kinema.service.app import create_app

    app = create_app(default_rate=args.rate, turbo=args.turbo)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinema",
        description="Robot animation engine: motion filtering, validation, "
                    "program execution, live tuning service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="run the motion filter over a trajectory")
    p.add_argument("--params", required=True,
                   help="preset name (e.g. X3D) or parameter JSON file")
    p.add_argument("--input", required=True,
                   help="input preset (phi_l/phi_r/phi_c) or CSV file with header t,s")
    p.add_argument("--rate", type=float, default=60.0, help="sample rate in Hz")
    p.add_argument("--duration", type=float, default=10.0, help="run length in seconds")
    p.add_argument("--seed", type=int, default=0, help="seed for phi_r")
    p.add_argument("--x0", type=float, default=None,
                   help="initial position (default: first set-point)")
    p.add_argument("--out", default="-", help="output CSV path, or - for stdout")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("validate", help="report kinematic-limit violations")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--clip", help="clip JSON file")
    src.add_argument("--trace", help="animation-frame JSON-lines file")
    p.add_argument("--embodiment", required=True, help="embodiment JSON file")
    p.add_argument("--rate", type=float, default=60.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("ghost", help="write the limit-corrected shadow trajectory")
    p.add_argument("--clip", required=True)
    p.add_argument("--embodiment", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--rate", type=float, default=60.0)
    p.add_argument("--out-dir", default="ghost_out")
    p.set_defaults(func=cmd_ghost)

    p = sub.add_parser("run", help="execute an animation program")
    p.add_argument("--program", required=True, help="program JSON file")
    p.add_argument("--embodiment", required=True)
    p.add_argument("--rate", type=float, default=60.0)
    p.add_argument("--duration", type=float, default=1.0)
    p.add_argument("--inputs", default=None,
                   help="scripted inputs JSON file: [{'t': s, ...}, ...]")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="TCP live-session server (newline JSON)")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--rate", type=float, default=60.0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--turbo", action="store_true",
                   help="no wall-clock pacing (tests/replay)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("api", help="HTTP/WebSocket service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--rate", type=float, default=60.0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--turbo", action="store_true")
    p.set_defaults(func=cmd_api)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KinemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
