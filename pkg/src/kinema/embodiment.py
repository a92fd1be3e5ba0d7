"""Robot embodiments as ordered sets of expressive degrees of freedom.

Every downstream structure (frames, programs, validation reports) is checked
against an :class:`EmbodimentSpec`.  A DoF is one individually controllable
expressive channel: a joint, a body-local spatial axis, an LED group, a
screen, or an audio player.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from kinema.errors import ParseError, ValidationError


class Dimension(Enum):
    STATIONARY = "stationary"
    SPATIAL = "spatial"
    DISPLAY = "display"
    AUDIBLE = "audible"


class ValueKind(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class SpatialAxis(Enum):
    X = "x"
    Y = "y"
    Z = "z"
    YAW = "yaw"
    PITCH = "pitch"
    ROLL = "roll"


@dataclass(frozen=True)
class KinematicLimits:
    """Per-DoF derivative bounds in native-units/s, /s^2, /s^3.

    Any bound may be absent; an absent bound is never checked or enforced.
    """

    velocity: Optional[float] = None
    acceleration: Optional[float] = None
    jerk: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("velocity", "acceleration", "jerk"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(f"{name} limit must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class DoFDescriptor:
    """One expressive channel with its value domain and kinematic limits."""

    name: str
    dimension: Dimension
    kind: ValueKind
    range: Optional[tuple[float, float]] = None
    labels: Optional[tuple[str, ...]] = None
    limits: Optional[KinematicLimits] = None
    axis: Optional[SpatialAxis] = None
    parent: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("DoF name must be non-empty")
        if self.kind is ValueKind.CONTINUOUS:
            if self.range is None:
                raise ValidationError(f"continuous DoF {self.name!r} requires a range")
            lo, hi = self.range
            if not lo < hi:
                raise ValidationError(
                    f"DoF {self.name!r} has degenerate range [{lo}, {hi}] (min must be < max)"
                )
            if self.labels is not None:
                raise ValidationError(f"continuous DoF {self.name!r} cannot carry labels")
        else:
            if not self.labels:
                raise ValidationError(f"discrete DoF {self.name!r} requires a non-empty label set")
            if self.range is not None:
                raise ValidationError(f"discrete DoF {self.name!r} cannot carry a range")
            if self.limits is not None:
                raise ValidationError(f"discrete DoF {self.name!r} cannot carry kinematic limits")
        if self.dimension is Dimension.SPATIAL and self.axis is None:
            raise ValidationError(f"spatial DoF {self.name!r} requires an axis")
        if self.dimension is not Dimension.SPATIAL and self.axis is not None:
            raise ValidationError(f"non-spatial DoF {self.name!r} cannot carry an axis")

    @property
    def p_min(self) -> float:
        assert self.range is not None
        return self.range[0]

    @property
    def p_max(self) -> float:
        assert self.range is not None
        return self.range[1]


@dataclass(frozen=True)
class KinematronicsProfile:
    """Counts of expressive DoFs along the four dimensions."""

    stationary: int
    spatial: int
    display: int
    audible: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.stationary, self.spatial, self.display, self.audible)


@dataclass(frozen=True)
class EmbodimentSpec:
    """A robot as an ordered list of DoFs.

    The DoF order is the canonical column order of animation frames.
    Immutable after construction; safe to share across threads.
    """

    name: str
    dofs: tuple[DoFDescriptor, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for dof in self.dofs:
            if dof.name in seen:
                raise ValidationError(f"duplicate DoF name {dof.name!r}")
            seen.add(dof.name)
        axes_used: set[SpatialAxis] = set()
        for dof in self.dofs:
            if dof.dimension is Dimension.SPATIAL:
                assert dof.axis is not None
                if dof.axis in axes_used:
                    raise ValidationError(
                        f"spatial axis {dof.axis.value!r} claimed by more than one DoF"
                    )
                axes_used.add(dof.axis)
        for dof in self.dofs:
            if dof.parent is not None and dof.parent not in seen:
                raise ValidationError(f"DoF {dof.name!r} names unknown parent {dof.parent!r}")

    def __getitem__(self, name: str) -> DoFDescriptor:
        for dof in self.dofs:
            if dof.name == name:
                return dof
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(dof.name == name for dof in self.dofs)

    def names(self) -> list[str]:
        return [dof.name for dof in self.dofs]

    def continuous(self) -> list[DoFDescriptor]:
        return [dof for dof in self.dofs if dof.kind is ValueKind.CONTINUOUS]


def profile(spec: EmbodimentSpec) -> KinematronicsProfile:
    """Count the spec's DoFs along the four kinematronics dimensions."""
    counts = {dim: 0 for dim in Dimension}
    for dof in spec.dofs:
        counts[dof.dimension] += 1
    return KinematronicsProfile(
        stationary=counts[Dimension.STATIONARY],
        spatial=counts[Dimension.SPATIAL],
        display=counts[Dimension.DISPLAY],
        audible=counts[Dimension.AUDIBLE],
    )


_DOF_KEYS = {"name", "dimension", "kind", "range", "labels", "limits", "axis", "parent"}
_LIMIT_KEYS = {"velocity", "acceleration", "jerk"}


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_dof(obj: dict, index: int) -> DoFDescriptor:
    if not isinstance(obj, dict):
        raise ParseError(f"dof #{index} must be an object")
    name = obj.get("name")
    where = f"dof {name!r}" if isinstance(name, str) else f"dof #{index}"
    _reject_unknown(obj, _DOF_KEYS, where)
    if not isinstance(name, str):
        raise ParseError(f"{where}: missing or non-string name")
    try:
        dimension = Dimension(obj.get("dimension"))
    except ValueError:
        raise ParseError(f"{where}: bad dimension {obj.get('dimension')!r}") from None
    try:
        kind = ValueKind(obj.get("kind"))
    except ValueError:
        raise ParseError(f"{where}: bad kind {obj.get('kind')!r}") from None

    rng = obj.get("range")
    if rng is not None:
        if (not isinstance(rng, list) or len(rng) != 2
                or not all(isinstance(v, (int, float)) for v in rng)):
            raise ParseError(f"{where}: range must be a [min, max] pair of numbers")
        rng = (float(rng[0]), float(rng[1]))

    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(v, str) for v in labels):
            raise ParseError(f"{where}: labels must be a list of strings")
        labels = tuple(labels)

    limits_obj = obj.get("limits")
    limits = None
    if limits_obj is not None:
        if not isinstance(limits_obj, dict):
            raise ParseError(f"{where}: limits must be an object")
        _reject_unknown(limits_obj, _LIMIT_KEYS, f"{where} limits")
        for key, value in limits_obj.items():
            if not isinstance(value, (int, float)):
                raise ParseError(f"{where}: limit {key!r} must be a number")
        try:
            limits = KinematicLimits(
                velocity=limits_obj.get("velocity"),
                acceleration=limits_obj.get("acceleration"),
                jerk=limits_obj.get("jerk"),
            )
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from None

    axis = obj.get("axis")
    if axis is not None:
        try:
            axis = SpatialAxis(axis)
        except ValueError:
            raise ParseError(f"{where}: bad axis {obj.get('axis')!r}") from None

    parent = obj.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ParseError(f"{where}: parent must be a string")

    try:
        return DoFDescriptor(
            name=name, dimension=dimension, kind=kind, range=rng,
            labels=labels, limits=limits, axis=axis, parent=parent,
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def load_embodiment(text: str) -> EmbodimentSpec:
    """Parse and validate an embodiment file (UTF-8 JSON).

    Raises :class:`ParseError` for malformed text and :class:`ValidationError`
    when a structurally valid file violates an invariant; the offending DoF is
    named in the message.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("embodiment file must be a JSON object")
    _reject_unknown(data, {"name", "dofs"}, "embodiment")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError("embodiment requires a non-empty string name")
    dofs_obj = data.get("dofs")
    if not isinstance(dofs_obj, list):
        raise ParseError("embodiment requires a dofs list")
    dofs = tuple(_parse_dof(obj, i) for i, obj in enumerate(dofs_obj))
    return EmbodimentSpec(name=name, dofs=dofs)


def serialize_embodiment(spec: EmbodimentSpec) -> str:
    """Inverse of :func:`load_embodiment`: emit the JSON file format."""
    dofs = []
    for dof in spec.dofs:
        obj: dict = {
            "name": dof.name,
            "dimension": dof.dimension.value,
            "kind": dof.kind.value,
        }
        if dof.range is not None:
            obj["range"] = [dof.range[0], dof.range[1]]
        if dof.labels is not None:
            obj["labels"] = list(dof.labels)
        if dof.limits is not None:
            limits = {}
            if dof.limits.velocity is not None:
                limits["velocity"] = dof.limits.velocity
            if dof.limits.acceleration is not None:
                limits["acceleration"] = dof.limits.acceleration
            if dof.limits.jerk is not None:
                limits["jerk"] = dof.limits.jerk
            obj["limits"] = limits
        if dof.axis is not None:
            obj["axis"] = dof.axis.value
        if dof.parent is not None:
            obj["parent"] = dof.parent
        dofs.append(obj)
    return json.dumps({"name": spec.name, "dofs": dofs}, indent=2)
