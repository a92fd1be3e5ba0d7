"""Animation frames and blending.

A partial animation frame (PAF) carries motion parameters for any subset of
an embodiment's DoFs, possibly none; the empty PAF is the identity for every
blend and for the merge onto the engine's latched full frame.  A full
animation frame (AF) covers every DoF of its embodiment, with continuous
values clamped into their DoF ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from kinema.embodiment import EmbodimentSpec, ValueKind
from kinema.errors import ValidationError


@dataclass(frozen=True)
class ContinuousValue:
    position: float
    velocity: Optional[float] = None
    acceleration: Optional[float] = None
    jerk: Optional[float] = None


@dataclass(frozen=True)
class DiscreteValue:
    label: str


ChannelValue = Union[ContinuousValue, DiscreteValue]


@dataclass
class PartialFrame:
    """Motion parameters for some (possibly zero) DoFs."""

    channels: dict[str, ChannelValue] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not self.channels

    def copy(self) -> "PartialFrame":
        return PartialFrame(dict(self.channels))


@dataclass
class AnimationFrame:
    """Full per-tick frame: embodiment name, delta-time, one value per DoF."""

    embodiment_name: str
    delta_time: float
    channels: dict[str, ChannelValue]


class BlendOp(Enum):
    OVERRIDE = "override"
    ADDITIVE = "additive"
    AVERAGE = "average"


def _add(a: ContinuousValue, b: ContinuousValue) -> ContinuousValue:
    velocity = None
    if a.velocity is not None or b.velocity is not None:
        velocity = (a.velocity or 0.0) + (b.velocity or 0.0)
    return ContinuousValue(a.position + b.position, velocity)


def _mix(a: ContinuousValue, b: ContinuousValue, w: float) -> ContinuousValue:
    velocity = None
    if a.velocity is not None or b.velocity is not None:
        velocity = (1.0 - w) * (a.velocity or 0.0) + w * (b.velocity or 0.0)
    return ContinuousValue((1.0 - w) * a.position + w * b.position, velocity)


def blend(base: PartialFrame, overlay: PartialFrame, op: BlendOp, weight: float = 0.5) -> PartialFrame:
    """Blend two PAFs; the result covers the union of their channels.

    Override: overlay wins per channel.  Additive: continuous values sum
    where both sides are present (discrete: overlay wins).  Average: convex
    combination with ``weight`` applied to the overlay.  A channel present on
    only one side is passed through unchanged by every op.
    """
    if op is BlendOp.AVERAGE and not (0.0 <= weight <= 1.0):
        raise ValidationError(f"average blend weight must be in [0, 1], got {weight!r}")
    out = dict(base.channels)
    for name, value in overlay.channels.items():
        if name not in out:
            out[name] = value
            continue
        current = out[name]
        if op is BlendOp.OVERRIDE:
            out[name] = value
        elif isinstance(current, DiscreteValue) or isinstance(value, DiscreteValue):
            out[name] = value
        elif op is BlendOp.ADDITIVE:
            out[name] = _add(current, value)
        else:
            out[name] = _mix(current, value, weight)
    return PartialFrame(out)


def merge_full(last: AnimationFrame, update: PartialFrame, spec: EmbodimentSpec) -> AnimationFrame:
    """Per-channel override of the latched frame; clamps continuous values."""
    channels = dict(last.channels)
    for name, value in update.channels.items():
        if name not in spec:
            raise ValidationError(f"frame update references unknown DoF {name!r}")
        dof = spec[name]
        if dof.kind is ValueKind.CONTINUOUS:
            if not isinstance(value, ContinuousValue):
                raise ValidationError(f"DoF {name!r} expects a continuous value")
            pos = min(max(value.position, dof.p_min), dof.p_max)
            value = ContinuousValue(pos, value.velocity, value.acceleration, value.jerk)
        else:
            if not isinstance(value, DiscreteValue):
                raise ValidationError(f"DoF {name!r} expects a discrete label")
            if value.label not in dof.labels:  # type: ignore[operator]
                raise ValidationError(
                    f"label {value.label!r} not in DoF {name!r} label set"
                )
        channels[name] = value
    return AnimationFrame(last.embodiment_name, last.delta_time, channels)


def default_frame(spec: EmbodimentSpec, delta_time: float) -> AnimationFrame:
    """Starting latch: continuous DoFs at 0 clamped into range, discrete at
    their first label."""
    channels: dict[str, ChannelValue] = {}
    for dof in spec.dofs:
        if dof.kind is ValueKind.CONTINUOUS:
            channels[dof.name] = ContinuousValue(min(max(0.0, dof.p_min), dof.p_max))
        else:
            channels[dof.name] = DiscreteValue(dof.labels[0])  # type: ignore[index]
    return AnimationFrame(spec.name, delta_time, channels)
