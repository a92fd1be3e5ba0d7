"""Live filter-tuning session: the message protocol, transport-agnostic.

One session owns one filter state.  Inbound messages (JSON objects) select
parameter presets or explicit parameters, choose a scripted input or a live
set-point, or reset the motion state.  The session emits one frame message
per tick once configured:

    {"type": "frame", "seq": k, "t": k*dt, "s": set_point,
     "x": ..., "v": ..., "a": ..., "j": ..., "rev": n}

``seq`` is the tick index, ``t`` is always seq * dt (wall-clock pacing never
skews recorded time), and ``rev`` counts inbound messages applied so far, so
a client can assert that a parameter change took effect by the next frame it
receives.  Frames are monotonically increasing in t within a session; the
motion state survives parameter swaps untouched.
"""

from __future__ import annotations

import json
from typing import Optional, Union

from kinema.errors import KinemaError, ValidationError
from kinema.filters import FilterParams, FilterState
from kinema.presets import get_preset, is_preset, params_from_dict
from kinema.signals import input_preset

Message = dict


class Session:
    """Protocol state machine: feed inbound dicts, tick for frame dicts."""

    def __init__(self, sample_rate: float = 60.0):
        if sample_rate <= 0:
            raise ValidationError(f"sample_rate must be positive, got {sample_rate!r}")
        self.sample_rate = sample_rate
        self.dt = 1.0 / sample_rate
        self.seq = 0
        self.rev = 0
        self.state: Optional[FilterState] = None
        self.schedule: list[tuple[float, float]] = []
        self.schedule_origin = 0.0
        self.schedule_idx = 0
        self.set_point = 0.0

    @property
    def started(self) -> bool:
        return self.state is not None

    def _at_rate(self, params: FilterParams) -> FilterParams:
        from dataclasses import replace

        if params.sample_rate != self.sample_rate:
            params = replace(params, sample_rate=self.sample_rate)
        return params

    def handle(self, message: Message) -> list[Message]:
        """Apply one inbound message; returns error messages, if any."""
        try:
            self._apply(message)
            self.rev += 1
            return []
        except (KinemaError, KeyError, TypeError, ValueError) as exc:
            return [{"type": "error", "message": str(exc)}]

    def _apply(self, message: Message) -> None:
        if not isinstance(message, dict):
            raise ValidationError("message must be a JSON object")
        mtype = message.get("type")
        payload = message.get("payload") or {}
        if mtype == "set_params":
            self._set_params(payload)
        elif mtype == "set_point":
            value = float(payload["value"] if isinstance(payload, dict) else payload)
            self._ensure_started()
            self.schedule = []
            self.set_point = min(max(value, self.state.params.p_min),
                                 self.state.params.p_max)
        elif mtype == "preset":
            self._preset(payload)
        elif mtype == "reset":
            self._ensure_started()
            x = payload.get("x") if isinstance(payload, dict) else None
            params = self.state.params
            x0 = self.set_point if x is None else float(x)
            x0 = min(max(x0, params.p_min), params.p_max)
            self.state = FilterState(params, x0)
        else:
            raise ValidationError(f"unknown message type {mtype!r}")

    def _set_params(self, payload) -> None:
        if isinstance(payload, str):
            params = get_preset(payload, self.sample_rate)
        elif isinstance(payload, dict) and "preset" in payload:
            params = get_preset(payload["preset"], self.sample_rate)
        elif isinstance(payload, dict):
            if self.state is not None:
                # partial update over the current params
                from kinema.presets import params_to_dict

                merged = params_to_dict(self.state.params)
                merged.update(payload)
                params = params_from_dict(merged)
            else:
                params = params_from_dict(payload)
        else:
            raise ValidationError("set_params payload must be an object or preset name")
        params = self._at_rate(params)
        if self.state is None:
            x0 = min(max(self.set_point, params.p_min), params.p_max)
            self.state = FilterState(params, x0)
        else:
            self.state.set_params(params)

    def _preset(self, payload) -> None:
        if isinstance(payload, str):
            payload = {"params": payload} if is_preset(payload) else {"input": payload}
        if not isinstance(payload, dict):
            raise ValidationError("preset payload must be an object or name")
        if "params" in payload:
            self._set_params(str(payload["params"]))
        if "input" in payload:
            self._ensure_started()
            p = self.state.params
            schedule = input_preset(
                str(payload["input"]),
                duration=float(payload.get("duration", 3600.0)),
                seed=int(payload.get("seed", 0)),
                p_min=p.p_min,
                p_max=p.p_max,
            )
            self.schedule = schedule
            self.schedule_origin = self.seq * self.dt
            self.schedule_idx = 0
            self.set_point = schedule[0][1]
            if self.seq == 0:
                # session not yet ticking: start the filter at the input's origin
                self.state = FilterState(p, min(max(self.set_point, p.p_min), p.p_max))

    def _ensure_started(self) -> None:
        if self.state is None:
            raise ValidationError("no parameters set yet (send set_params or preset first)")

    def tick(self) -> Optional[Message]:
        """Advance one sample; None until parameters have been set."""
        if self.state is None:
            return None
        self.seq += 1
        t = self.seq * self.dt
        rel = t - self.schedule_origin
        while (self.schedule_idx < len(self.schedule)
               and self.schedule[self.schedule_idx][0] <= rel + 1e-12):
            self.set_point = self.schedule[self.schedule_idx][1]
            self.schedule_idx += 1
        out = self.state.step(self.set_point)
        return {
            "type": "frame", "seq": self.seq, "t": t, "s": self.set_point,
            "x": out.x, "v": out.v, "a": out.a, "j": out.j, "rev": self.rev,
        }


def decode_line(line: Union[str, bytes]) -> Message:
    try:
        message = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed message: {exc}") from None
    if not isinstance(message, dict):
        raise ValidationError("message must be a JSON object")
    return message


def encode_line(message: Message) -> str:
    return json.dumps(message) + "\n"
