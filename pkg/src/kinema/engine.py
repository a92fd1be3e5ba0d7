"""The programmable animation pipeline.

An animation program is a small dataflow description: layers of blocks whose
PAFs blend top-down, then an optional second stage of whole-body
post-processors (per-channel motion filtering, hard limit enforcement).  The
engine executes the program once per tick, merges the result over its latched
last full frame, and hands complete animation frames to the caller.

Program complexity levels:

- level 0: a single block, single layer, no second stage
- level 1: one layer of sequentially composed blocks
- level 2: multiple blended layers
- level 3: layers plus second-stage post-processors

A structure valid at level L is valid at every higher level; declaring a
level lower than the structure demands is a compile error.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from kinema.anim import AnimationClip
from kinema.blocks import Block, build_block
from kinema.embodiment import EmbodimentSpec, ValueKind
from kinema.errors import CompileError, ValidationError
from kinema.frames import (
    AnimationFrame,
    BlendOp,
    ContinuousValue,
    PartialFrame,
    blend,
    default_frame,
    merge_full,
)

log = logging.getLogger(__name__)

EngineInputs = dict[str, Union[float, int, str]]


@dataclass
class Layer:
    blocks: list[Block]
    blend_op: BlendOp = BlendOp.OVERRIDE
    weight: float = 0.5


class LimitEnforcer(Block):
    """Second-stage hard guard: clamps positions into range and slews them
    against each DoF's velocity limit relative to the previous output."""

    kind = "limit_enforcer"
    is_source = False

    def __init__(self, spec: EmbodimentSpec, name: str = ""):
        super().__init__(name)
        self.spec = spec
        self.last: dict[str, float] = {}

    def eval(self, paf: Optional[PartialFrame], dt: float) -> PartialFrame:
        if paf is None:
            raise ValidationError("operator block invoked without input")
        out = dict(paf.channels)
        for name, value in paf.channels.items():
            if not isinstance(value, ContinuousValue) or name not in self.spec:
                continue
            dof = self.spec[name]
            if dof.kind is not ValueKind.CONTINUOUS:
                continue
            pos = min(max(value.position, dof.p_min), dof.p_max)
            limit = dof.limits.velocity if dof.limits else None
            prev = self.last.get(name)
            if limit is not None and prev is not None:
                dv = limit * dt
                pos = min(max(pos, prev - dv), prev + dv)
            self.last[name] = pos
            out[name] = ContinuousValue(pos)
        return PartialFrame(out)


@dataclass
class AnimationProgram:
    level: int
    layers: list[Layer]
    stage2: list[Block] = field(default_factory=list)
    bindings: dict[str, list[tuple[Block, str]]] = field(default_factory=dict)


def minimum_level(n_layers: int, n_blocks_first: int, has_stage2: bool) -> int:
    if has_stage2:
        return 3
    if n_layers > 1:
        return 2
    if n_blocks_first > 1:
        return 1
    return 0


def compile_program(
    text: str,
    spec: EmbodimentSpec,
    assets: Optional[dict[str, AnimationClip]] = None,
    sample_rate: float = 60.0,
) -> AnimationProgram:
    """Parse, build and validate an animation program file.

    Raises :class:`CompileError` naming the offending layer/block for unknown
    DoFs or clips, level violations, and operators with no upstream source.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CompileError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise CompileError("program file must be a JSON object")
    level = data.get("level")
    if level not in (0, 1, 2, 3):
        raise CompileError(f"program level must be 0..3, got {level!r}")
    layers_obj = data.get("layers")
    if not isinstance(layers_obj, list) or not layers_obj:
        raise CompileError("program requires a non-empty layers list")

    library = dict(assets or {})
    bindings: dict[str, list[tuple[Block, str]]] = {}
    layers: list[Layer] = []
    for li, lobj in enumerate(layers_obj):
        blend_name = lobj.get("blend", "override")
        try:
            blend_op = BlendOp(blend_name)
        except ValueError:
            raise CompileError(f"layer {li}: unknown blend op {blend_name!r}") from None
        weight = float(lobj.get("weight", 0.5))
        if blend_op is BlendOp.AVERAGE and not (0.0 <= weight <= 1.0):
            raise CompileError(f"layer {li}: average weight must be in [0, 1]")
        blocks_obj = lobj.get("blocks")
        if not isinstance(blocks_obj, list) or not blocks_obj:
            raise CompileError(f"layer {li}: requires a non-empty blocks list")
        blocks: list[Block] = []
        seen_source = False
        for bi, bobj in enumerate(blocks_obj):
            kind = bobj.get("kind")
            params = {k: v for k, v in bobj.items()
                      if k not in ("kind", "name", "bindings")}
            try:
                block = build_block(kind, params, spec, library, sample_rate,
                                    name=bobj.get("name", ""))
            except CompileError as exc:
                raise CompileError(f"layer {li} block {bi}: {exc}") from None
            if block.is_source:
                seen_source = True
            elif not seen_source:
                raise CompileError(
                    f"layer {li} block {bi}: operator {kind!r} has no upstream source"
                )
            for input_key, param in (bobj.get("bindings") or {}).items():
                bindings.setdefault(input_key, []).append((block, param))
            blocks.append(block)
        layers.append(Layer(blocks, blend_op, weight))

    stage2: list[Block] = []
    for si, sobj in enumerate(data.get("stage2") or []):
        kind = sobj.get("kind")
        params = {k: v for k, v in sobj.items() if k not in ("kind", "name", "bindings")}
        if kind == "limit_enforcer":
            block: Block = LimitEnforcer(spec, name=sobj.get("name", ""))
        else:
            try:
                block = build_block(kind, params, spec, library, sample_rate,
                                    name=sobj.get("name", ""))
            except CompileError as exc:
                raise CompileError(f"stage2 processor {si}: {exc}") from None
            if block.is_source:
                raise CompileError(f"stage2 processor {si}: {kind!r} is not an operator")
        for input_key, param in (sobj.get("bindings") or {}).items():
            bindings.setdefault(input_key, []).append((block, param))
        stage2.append(block)

    required = minimum_level(len(layers), len(layers[0].blocks), bool(stage2))
    if level < required:
        raise CompileError(
            f"declared level {level} but the structure requires level {required}"
        )
    return AnimationProgram(level=level, layers=layers, stage2=stage2, bindings=bindings)


class Engine:
    """Single-ticker executor of one program against one embodiment.

    ``tick`` calls are strictly serialized per instance; distinct instances
    are independent.  Channels untouched by a tick hold their last value.
    """

    def __init__(self, spec: EmbodimentSpec, program: AnimationProgram):
        self.spec = spec
        self.program = program
        self.last_frame: Optional[AnimationFrame] = None
        self.t = 0.0

    def tick(self, inputs: Optional[EngineInputs], delta_time: float) -> AnimationFrame:
        """Run one pipeline cycle and return the merged full frame."""
        if delta_time <= 0:
            raise ValidationError(f"delta_time must be positive, got {delta_time!r}")
        if self.last_frame is None:
            self.last_frame = default_frame(self.spec, delta_time)
        self._route_inputs(inputs or {})

        self.t += delta_time
        result: Optional[PartialFrame] = None
        for layer in self.program.layers:
            paf: Optional[PartialFrame] = None
            for block in layer.blocks:
                paf = block.eval(None if block.is_source else paf, delta_time)
            assert paf is not None
            if result is None:
                result = paf
            else:
                result = blend(result, paf, layer.blend_op, layer.weight)
        assert result is not None
        for block in self.program.stage2:
            result = block.eval(result, delta_time)

        frame = merge_full(self.last_frame, result, self.spec)
        frame.delta_time = delta_time
        self.last_frame = frame
        return frame

    def _route_inputs(self, inputs: EngineInputs) -> None:
        routed = dict(inputs)
        commands = routed.pop("commands", None)
        if commands is not None:
            if isinstance(commands, str):
                commands = [commands]
            for command in commands:  # type: ignore[union-attr]
                key, _, value = str(command).partition(":")
                routed[key] = value if value else 1
        # validate before applying anything so a rejected tick leaves no trace
        for key, value in routed.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ValidationError(f"non-finite input value for {key!r}")
        for key, value in routed.items():
            targets = self.program.bindings.get(key)
            if not targets:
                log.info("ignoring unbound input %r", key)
                continue
            for block, param in targets:
                block.set_param(param, value)


def frame_to_json(frame: AnimationFrame, t: float) -> str:
    """One output-stream line: {"t", "dt", "channels": {name: value|label}}."""
    channels: dict[str, Union[float, str]] = {}
    for name, value in frame.channels.items():
        if isinstance(value, ContinuousValue):
            channels[name] = value.position
        else:
            channels[name] = value.label
    return json.dumps({"t": t, "dt": frame.delta_time, "channels": channels})


def run_program(
    engine: Engine,
    sample_rate: float,
    duration: float,
    scripted_inputs: Optional[list[dict]] = None,
) -> list[tuple[float, AnimationFrame]]:
    """Tick the engine at a fixed rate, feeding time-stamped scripted inputs.

    Each scripted entry {"t": seconds, ...inputs} is delivered at the first
    tick at or after its time.  A tick rejected for bad inputs re-emits the
    prior frame, never aborts the run.
    """
    if duration <= 0 or sample_rate <= 0:
        raise ValidationError("duration and sample_rate must be positive")
    dt = 1.0 / sample_rate
    n_ticks = round(duration * sample_rate)
    pending = sorted(scripted_inputs or [], key=lambda e: e.get("t", 0.0))
    idx = 0
    frames: list[tuple[float, AnimationFrame]] = []
    for k in range(1, n_ticks + 1):
        t = k * dt
        inputs: EngineInputs = {}
        while idx < len(pending) and pending[idx].get("t", 0.0) <= t + 1e-12:
            entry = dict(pending[idx])
            entry.pop("t", None)
            inputs.update(entry)
            idx += 1
        try:
            frame = engine.tick(inputs, dt)
        except ValidationError as exc:
            log.warning("tick %d rejected: %s", k, exc)
            frame = engine.last_frame or default_frame(engine.spec, dt)
        frames.append((t, frame))
    return frames
