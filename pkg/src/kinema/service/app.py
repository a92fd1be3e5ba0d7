"""HTTP/WebSocket service wrapping the animation engine and motion filter.

REST endpoints cover the batch operations (filter runs, trajectory
validation, ghost correction, program execution); ``/session`` upgrades to a
WebSocket speaking the live-session protocol, one JSON object per message —
the browser-side bridge to the same protocol the TCP server speaks.  When a
built frontend is present it is served at ``/``.
"""

from __future__ import annotations

import asyncio
import json
import time
from pathlib import Path
from typing import Union

from fastapi import FastAPI, Query, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from kinema import __version__
from kinema.anim import load_clip
from kinema.embodiment import load_embodiment, profile
from kinema.engine import Engine, compile_program, run_program
from kinema.errors import KinemaError
from kinema.filters import FilterParams, run
from kinema.frames import ContinuousValue
from kinema.presets import get_preset, params_to_dict, params_from_dict, preset_names
from kinema.service import models
from kinema.service.session import Session, decode_line
from kinema.signals import INPUT_PRESETS, input_preset
from kinema.validator import check_trajectory, ghost

_FRONTEND_DIST = Path(__file__).resolve().parents[3] / "frontend" / "dist"


def _params_from_request(spec: Union[str, models.FilterParamsModel], rate: float) -> FilterParams:
    if isinstance(spec, str):
        return get_preset(spec, rate)
    obj = spec.model_dump(exclude_none=True)
    obj["sample_rate"] = rate
    return params_from_dict(obj)


def _params_model(params: FilterParams) -> models.FilterParamsModel:
    return models.FilterParamsModel(**params_to_dict(params))


def _clip_samples(clip_obj: dict, rate: float) -> dict[str, list[float]]:
    """Sample every clip channel at the given rate over its duration."""
    clip = load_clip(json.dumps(clip_obj))
    from kinema.anim import sample_curve

    n = max(2, round(clip.duration * rate) + 1)
    dt = 1.0 / rate
    return {
        curve.dof_name: [sample_curve(curve, i * dt) for i in range(n)]
        for curve in clip.curves
    }


def _violation_models(violations) -> list[models.ViolationModel]:
    return [
        models.ViolationModel(dof=v.dof_name, index=v.sample_index, t=v.time,
                              kind=v.kind.value, actual=v.actual, limit=v.limit)
        for v in violations
    ]


def create_app(default_rate: float = 60.0, turbo: bool = False) -> FastAPI:
    app = FastAPI(title="kinema", version=__version__)

    @app.exception_handler(KinemaError)
    async def _domain_error(request, exc: KinemaError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/presets", response_model=models.PresetListResponse)
    def presets() -> models.PresetListResponse:
        return models.PresetListResponse(
            filters=[
                models.PresetInfo(name=name, params=_params_model(get_preset(name)))
                for name in preset_names()
            ],
            inputs=list(INPUT_PRESETS),
        )

    @app.post("/filter/run", response_model=models.FilterRunResponse)
    def filter_run(req: models.FilterRunRequest) -> models.FilterRunResponse:
        params = _params_from_request(req.params, req.rate)
        if isinstance(req.input, str):
            points = input_preset(req.input, req.duration, req.seed,
                                  params.p_min, params.p_max)
        else:
            points = [(p.t, p.s) for p in req.input]
        x0 = req.x0 if req.x0 is not None else points[0][1]
        x0 = min(max(x0, params.p_min), params.p_max)
        outputs = run(params, x0, points, req.duration)
        dt = 1.0 / req.rate
        return models.FilterRunResponse(rows=[
            models.FilterSample(t=(k + 1) * dt, x=o.x, v=o.v, a=o.a, j=o.j)
            for k, o in enumerate(outputs)
        ])

    @app.post("/embodiment/profile", response_model=models.ProfileResponse)
    def embodiment_profile(req: models.ProfileRequest) -> models.ProfileResponse:
        spec = load_embodiment(json.dumps(req.embodiment))
        p = profile(spec)
        return models.ProfileResponse(
            name=spec.name, stationary=p.stationary, spatial=p.spatial,
            display=p.display, audible=p.audible,
        )

    @app.post("/validate", response_model=models.ValidateResponse)
    def validate(req: models.ValidateRequest) -> models.ValidateResponse:
        spec = load_embodiment(json.dumps(req.embodiment))
        samples = _clip_samples(req.clip, req.rate)
        violations = check_trajectory(samples, spec, req.rate)
        by_kind: dict[str, int] = {}
        by_dof: dict[str, int] = {}
        for v in violations:
            by_kind[v.kind.value] = by_kind.get(v.kind.value, 0) + 1
            by_dof[v.dof_name] = by_dof.get(v.dof_name, 0) + 1
        return models.ValidateResponse(
            violations=_violation_models(violations), by_kind=by_kind, by_dof=by_dof,
        )

    @app.post("/ghost", response_model=models.GhostResponse)
    def ghost_endpoint(req: models.GhostRequest) -> models.GhostResponse:
        spec = load_embodiment(json.dumps(req.embodiment))
        samples = _clip_samples(req.clip, req.rate)
        params = _params_from_request(req.params, req.rate)
        report = ghost(samples, spec, params, req.rate)
        dt = 1.0 / req.rate
        corrected = {
            name: models.GhostDoFResult(
                samples=[
                    models.FilterSample(t=i * dt, x=o.x, v=o.v, a=o.a, j=o.j)
                    for i, o in enumerate(outs)
                ],
                max_deviation=report.max_deviation[name],
            )
            for name, outs in report.corrected.items()
        }
        return models.GhostResponse(
            corrected=corrected,
            residual_violations=_violation_models(report.residual_violations),
        )

    @app.post("/program/run", response_model=models.ProgramRunResponse)
    def program_run(req: models.ProgramRunRequest) -> models.ProgramRunResponse:
        spec = load_embodiment(json.dumps(req.embodiment))
        assets = {name: load_clip(json.dumps(obj)) for name, obj in req.clips.items()}
        program = compile_program(json.dumps(req.program), spec, assets, req.rate)
        engine = Engine(spec, program)
        frames = run_program(engine, req.rate, req.duration, req.inputs)
        out = []
        for t, frame in frames:
            channels: dict[str, Union[float, str]] = {}
            for name, value in frame.channels.items():
                channels[name] = (value.position if isinstance(value, ContinuousValue)
                                  else value.label)
            out.append(models.FrameModel(t=t, dt=frame.delta_time, channels=channels))
        return models.ProgramRunResponse(frames=out)

    @app.websocket("/session")
    async def session_socket(
        ws: WebSocket,
        rate: float = Query(default=default_rate),
        turbo_q: bool = Query(default=turbo, alias="turbo"),
    ) -> None:
        await ws.accept()
        session = Session(rate)
        inbox: asyncio.Queue = asyncio.Queue()

        async def reader() -> None:
            try:
                while True:
                    await inbox.put(await ws.receive_text())
            except WebSocketDisconnect:
                await inbox.put(None)

        reader_task = asyncio.create_task(reader())
        try:
            next_deadline = time.monotonic()
            while True:
                # drain inbound messages before each tick
                while not inbox.empty():
                    line = inbox.get_nowait()
                    if line is None:
                        return
                    try:
                        message = decode_line(line)
                    except KinemaError as exc:
                        await ws.send_text(json.dumps({"type": "error",
                                                       "message": str(exc)}))
                        continue
                    for err in session.handle(message):
                        await ws.send_text(json.dumps(err))
                if not session.started:
                    line = await inbox.get()
                    if line is None:
                        return
                    try:
                        message = decode_line(line)
                        for err in session.handle(message):
                            await ws.send_text(json.dumps(err))
                    except KinemaError as exc:
                        await ws.send_text(json.dumps({"type": "error",
                                                       "message": str(exc)}))
                    next_deadline = time.monotonic()
                    continue
                frame = session.tick()
                if frame is not None:
                    await ws.send_text(json.dumps(frame))
                if not turbo_q:
                    next_deadline += session.dt
                    delay = next_deadline - time.monotonic()
                    if delay > 0:
                        await asyncio.sleep(delay)
                else:
                    await asyncio.sleep(0)
        except WebSocketDisconnect:
            pass
        finally:
            reader_task.cancel()

    if _FRONTEND_DIST.is_dir():
        # explicit routes above win; everything else falls through to the UI
        app.mount("/", StaticFiles(directory=_FRONTEND_DIST, html=True), name="ui")

    return app
