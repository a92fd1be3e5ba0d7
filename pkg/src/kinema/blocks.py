"""Animation blocks: the nodes an animation program wires into layers.

Source blocks generate a PAF each tick (clip playback, oscillators, noise,
constant poses); operator blocks transform the PAF handed to them (gain,
contrast around a reference pose, per-channel motion filtering).  Every block
has an ``enabled`` switch: a disabled source emits the empty PAF, a disabled
operator passes its input through.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from kinema.anim import AnimationClip, sample_clip
from kinema.embodiment import EmbodimentSpec, ValueKind
from kinema.errors import CompileError, ValidationError
from kinema.filters import FilterParams, FilterState, Limiter, Order
from kinema.frames import ContinuousValue, DiscreteValue, PartialFrame

SOURCE_KINDS = ("clip_player", "sine", "noise", "constant_pose")
OPERATOR_KINDS = ("gain_offset", "contrast", "filter_bank")


class Block:
    """Base animation block; subclasses implement :meth:`eval`."""

    kind: str = ""
    is_source: bool = False

    def __init__(self, name: str = ""):
        self.name = name
        self.enabled = True

    def set_param(self, param: str, value) -> None:
        if param == "enabled":
            self.enabled = _as_bool(value)
        else:
            raise ValidationError(f"block {self.kind!r} has no parameter {param!r}")

    def eval(self, paf: Optional[PartialFrame], dt: float) -> PartialFrame:
        raise NotImplementedError


def _as_bool(value) -> bool:
    if isinstance(value, str):
        return value.lower() in ("1", "on", "true", "yes")
    return bool(value)


class ClipPlayer(Block):
    kind = "clip_player"
    is_source = True

    def __init__(self, clip: AnimationClip, loop: bool = False,
                 library: Optional[dict[str, AnimationClip]] = None, name: str = ""):
        super().__init__(name)
        self.clip = clip
        self.loop = loop
        self.library = library or {}
        self.playhead = 0.0
        self._started = False

    def set_param(self, param: str, value) -> None:
        if param == "play":
            # value may name another clip in the library; bare truthy restarts
            if isinstance(value, str) and value in self.library:
                self.clip = self.library[value]
            self.playhead = 0.0
            self._started = False
            self.enabled = True
        elif param == "loop":
            self.loop = _as_bool(value)
        else:
            super().set_param(param, value)

    def eval(self, paf, dt: float) -> PartialFrame:
        if not self.enabled:
            return PartialFrame()
        if self._started:
            self.playhead += dt
        else:
            self._started = True
        if self.loop and self.clip.duration > 0:
            self.playhead = self.playhead % self.clip.duration
        elif self.playhead > self.clip.duration:
            self.playhead = self.clip.duration  # hold-at-end is idempotent
        channels = {}
        for name, value in sample_clip(self.clip, self.playhead).items():
            if isinstance(value, str):
                channels[name] = DiscreteValue(value)
            else:
                channels[name] = ContinuousValue(value)
        return PartialFrame(channels)


class SineGenerator(Block):
    kind = "sine"
    is_source = True

    def __init__(self, dof: str, amplitude: float, frequency: float,
                 phase: float = 0.0, offset: float = 0.0, name: str = ""):
        super().__init__(name)
        self.dof = dof
        self.amplitude = amplitude
        self.frequency = frequency
        self.phase = phase
        self.offset = offset
        self.t = 0.0

    def set_param(self, param: str, value) -> None:
        if param in ("amplitude", "frequency", "phase", "offset"):
            setattr(self, param, float(value))
        else:
            super().set_param(param, value)

    def eval(self, paf, dt: float) -> PartialFrame:
        self.t += dt
        if not self.enabled:
            return PartialFrame()
        value = self.offset + self.amplitude * math.sin(
            2.0 * math.pi * self.frequency * self.t + self.phase
        )
        return PartialFrame({self.dof: ContinuousValue(value)})


class NoiseGenerator(Block):
    """Seeded Gaussian noise through a single-pole low-pass (reproducible)."""

    kind = "noise"
    is_source = True

    def __init__(self, dof: str, mean: float = 0.0, stddev: float = 1.0,
                 seed: int = 0, smoothing: float = 0.1, name: str = ""):
        super().__init__(name)
        if not (0.0 <= smoothing <= 1.0):
            raise ValidationError(f"noise smoothing must be in [0, 1], got {smoothing!r}")
        self.dof = dof
        self.mean = mean
        self.stddev = stddev
        self.smoothing = smoothing
        self.rng = random.Random(seed)
        self.value = mean

    def set_param(self, param: str, value) -> None:
        if param in ("mean", "stddev", "smoothing"):
            setattr(self, param, float(value))
        else:
            super().set_param(param, value)

    def eval(self, paf, dt: float) -> PartialFrame:
        raw = self.rng.gauss(self.mean, self.stddev)
        self.value += self.smoothing * (raw - self.value)
        if not self.enabled:
            return PartialFrame()
        return PartialFrame({self.dof: ContinuousValue(self.value)})


class ConstantPose(Block):
    kind = "constant_pose"
    is_source = True

    def __init__(self, values: dict[str, object], name: str = ""):
        super().__init__(name)
        channels: dict[str, object] = {}
        for dof, value in values.items():
            if isinstance(value, str):
                channels[dof] = DiscreteValue(value)
            else:
                channels[dof] = ContinuousValue(float(value))  # type: ignore[arg-type]
        self.pose = PartialFrame(channels)  # type: ignore[arg-type]

    def eval(self, paf, dt: float) -> PartialFrame:
        if not self.enabled:
            return PartialFrame()
        return self.pose.copy()


class GainOffset(Block):
    kind = "gain_offset"
    is_source = False

    def __init__(self, gain: float = 1.0, offset: float = 0.0,
                 dofs: Optional[list[str]] = None, name: str = ""):
        super().__init__(name)
        self.gain = gain
        self.offset = offset
        self.dofs = set(dofs) if dofs else None

    def set_param(self, param: str, value) -> None:
        if param in ("gain", "offset"):
            setattr(self, param, float(value))
        else:
            super().set_param(param, value)

    def eval(self, paf: Optional[PartialFrame], dt: float) -> PartialFrame:
        if paf is None:
            raise ValidationError("operator block invoked without input")
        if not self.enabled:
            return paf
        out = {}
        for name, value in paf.channels.items():
            if isinstance(value, ContinuousValue) and (self.dofs is None or name in self.dofs):
                out[name] = ContinuousValue(self.gain * value.position + self.offset)
            else:
                out[name] = value
        return PartialFrame(out)


class Contrast(Block):
    """Exaggeration: scale each channel's deviation from a reference pose."""

    kind = "contrast"
    is_source = False

    def __init__(self, gain: float = 1.0, reference: Optional[dict[str, float]] = None,
                 name: str = ""):
        super().__init__(name)
        self.gain = gain
        self.reference = reference or {}

    def set_param(self, param: str, value) -> None:
        if param == "gain":
            self.gain = float(value)
        else:
            super().set_param(param, value)

    def eval(self, paf: Optional[PartialFrame], dt: float) -> PartialFrame:
        if paf is None:
            raise ValidationError("operator block invoked without input")
        if not self.enabled:
            return paf
        out = {}
        for name, value in paf.channels.items():
            if isinstance(value, ContinuousValue):
                ref = self.reference.get(name, 0.0)
                out[name] = ContinuousValue(ref + self.gain * (value.position - ref))
            else:
                out[name] = value
        return PartialFrame(out)


class FilterBank(Block):
    """One motion filter per continuous channel, fed the channel's position
    as set-point.  Limits and range default from the embodiment DoF; the
    filter order drops to what the DoF's available limits support."""

    kind = "filter_bank"
    is_source = False

    def __init__(self, spec: EmbodimentSpec, base: FilterParams,
                 dofs: Optional[list[str]] = None, name: str = ""):
        super().__init__(name)
        self.spec = spec
        self.base = base
        self.dofs = set(dofs) if dofs else None
        self.states: dict[str, FilterState] = {}

    def params_for(self, dof_name: str) -> FilterParams:
        dof = self.spec[dof_name]
        limits = dof.limits
        order = self.base.order
        velocity = self.base.velocity_limit
        acceleration = self.base.acceleration_limit
        jerk = self.base.jerk_limit
        if limits is not None:
            if limits.velocity is not None:
                velocity = limits.velocity
            acceleration = limits.acceleration or acceleration
            jerk = limits.jerk or jerk
        if order is Order.C3 and jerk is None:
            order = Order.C2
        if order is not Order.C1 and acceleration is None:
            order = Order.C1
        return FilterParams(
            order=order,
            limiter=self.base.limiter,
            sigma=self.base.sigma,
            rho=self.base.rho,
            beta=self.base.beta,
            p_min=dof.p_min,
            p_max=dof.p_max,
            velocity_limit=velocity,
            acceleration_limit=None if order is Order.C1 else acceleration,
            jerk_limit=jerk if order is Order.C3 else None,
            sample_rate=self.base.sample_rate,
            stabilizer_enabled=self.base.stabilizer_enabled,
        )

    def eval(self, paf: Optional[PartialFrame], dt: float) -> PartialFrame:
        if paf is None:
            raise ValidationError("operator block invoked without input")
        if not self.enabled:
            return paf
        out = dict(paf.channels)
        for name, value in paf.channels.items():
            if not isinstance(value, ContinuousValue):
                continue
            if self.dofs is not None and name not in self.dofs:
                continue
            if name not in self.spec or self.spec[name].kind is not ValueKind.CONTINUOUS:
                continue
            state = self.states.get(name)
            if state is None:
                params = self.params_for(name)
                x0 = min(max(value.position, params.p_min), params.p_max)
                state = FilterState(params, x0)
                self.states[name] = state
            stepped = state.step(value.position)
            out[name] = ContinuousValue(stepped.x, stepped.v, stepped.a, stepped.j)
        return PartialFrame(out)


def build_block(kind: str, params: dict, spec: EmbodimentSpec,
                library: dict[str, AnimationClip], sample_rate: float,
                name: str = "") -> Block:
    """Instantiate a block from its program-file description."""
    try:
        if kind == "clip_player":
            clip_name = params["clip"]
            if clip_name not in library:
                raise CompileError(f"unknown clip {clip_name!r}")
            return ClipPlayer(library[clip_name], loop=bool(params.get("loop", False)),
                              library=library, name=name)
        if kind == "sine":
            _require_dof(spec, params["dof"])
            return SineGenerator(params["dof"], float(params.get("amplitude", 1.0)),
                                 float(params.get("frequency", 1.0)),
                                 float(params.get("phase", 0.0)),
                                 float(params.get("offset", 0.0)), name=name)
        if kind == "noise":
            _require_dof(spec, params["dof"])
            return NoiseGenerator(params["dof"], float(params.get("mean", 0.0)),
                                  float(params.get("stddev", 1.0)),
                                  int(params.get("seed", 0)),
                                  float(params.get("smoothing", 0.1)), name=name)
        if kind == "constant_pose":
            values = params["values"]
            for dof in values:
                _require_dof(spec, dof)
            return ConstantPose(values, name=name)
        if kind == "gain_offset":
            return GainOffset(float(params.get("gain", 1.0)),
                              float(params.get("offset", 0.0)),
                              params.get("dofs"), name=name)
        if kind == "contrast":
            return Contrast(float(params.get("gain", 1.0)),
                            params.get("reference"), name=name)
        if kind == "filter_bank":
            from kinema.presets import get_preset, params_from_dict

            if "preset" in params:
                base = get_preset(params["preset"], sample_rate)
            elif "params" in params:
                base = params_from_dict(params["params"])
            else:
                # character defaults; limits come from each DoF descriptor
                base = FilterParams(
                    order=Order[params.get("order", "C2")],
                    limiter=Limiter(params.get("limiter", "tanh")),
                    sigma=float(params.get("sigma", 0.95)),
                    rho=float(params.get("rho", 0.2)),
                    beta=int(params.get("beta", 5)),
                    p_min=-1.0, p_max=1.0, velocity_limit=1.0,
                    acceleration_limit=1.0, jerk_limit=1.0,
                    sample_rate=sample_rate,
                )
            for dof in params.get("dofs") or []:
                _require_dof(spec, dof)
            return FilterBank(spec, base, params.get("dofs"), name=name)
    except KeyError as exc:
        raise CompileError(f"block {kind!r} missing parameter {exc}") from None
    raise CompileError(f"unknown block kind {kind!r}")


def _require_dof(spec: EmbodimentSpec, dof: str) -> None:
    if dof not in spec:
        raise CompileError(f"unknown DoF {dof!r}")
