"""Keyframe animation assets: curves with tangent control, discrete event
tracks, named anchors, sampling, and anchor-based time warping.

Curves interpolate with cubic Hermite segments.  Tangent modes per key:

- ``linear``: each side's tangent is the chord slope toward that neighbour.
- ``smooth``: interior keys get the Catmull-Rom tangent (previous-to-next
  chord); endpoint keys are flat (zero tangent), so clips ease in from rest
  and ease out to rest.  Keys whose neighbours reverse direction get a
  near-zero tangent, which is the classic slow-in/slow-out.
- ``custom``: the stored in/out tangents are used verbatim; a negative out
  tangent on the first key yields the pull-back dip of an anticipation move.

Sampling outside the key span clamps to the end values (robots hold poses;
looping belongs to the clip player, not the curve).
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from kinema.errors import ParseError, ValidationError


class TangentMode(Enum):
    LINEAR = "linear"
    SMOOTH = "smooth"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Keyframe:
    time: float
    value: float
    mode: TangentMode = TangentMode.SMOOTH
    in_tangent: Optional[float] = None
    out_tangent: Optional[float] = None

    def __post_init__(self) -> None:
        if not _finite(self.time) or not _finite(self.value):
            raise ValidationError(f"keyframe at t={self.time!r} has non-finite fields")
        if self.mode is TangentMode.CUSTOM:
            if self.in_tangent is None or self.out_tangent is None:
                raise ValidationError(
                    f"custom keyframe at t={self.time} requires both tangents"
                )


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and x == x and abs(x) != float("inf")


@dataclass(frozen=True)
class Curve:
    """Time-ordered keyframes for one DoF."""

    dof_name: str
    keys: tuple[Keyframe, ...]

    def __post_init__(self) -> None:
        if not self.keys:
            raise ValidationError(f"curve for {self.dof_name!r} needs at least one key")
        for k0, k1 in zip(self.keys, self.keys[1:]):
            if not k0.time < k1.time:
                raise ValidationError(
                    f"curve for {self.dof_name!r}: key times must strictly increase "
                    f"({k0.time} then {k1.time})"
                )


@dataclass(frozen=True)
class DiscreteTrack:
    """Time-ordered labelled events for a discrete DoF (display/audible)."""

    dof_name: str
    events: tuple[tuple[float, str], ...]

    def __post_init__(self) -> None:
        for (t0, _), (t1, _) in zip(self.events, self.events[1:]):
            if not t0 < t1:
                raise ValidationError(
                    f"track for {self.dof_name!r}: event times must strictly increase"
                )

    def sample(self, t: float) -> Optional[str]:
        """Latest label at or before ``t``; None before the first event."""
        label = None
        for et, lab in self.events:
            if et <= t:
                label = lab
            else:
                break
        return label


@dataclass(frozen=True)
class Anchor:
    name: str
    time: float


@dataclass(frozen=True)
class AnimationClip:
    name: str
    duration: float
    curves: tuple[Curve, ...] = ()
    tracks: tuple[DiscreteTrack, ...] = ()
    anchors: tuple[Anchor, ...] = ()

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValidationError(f"clip {self.name!r} duration must be positive")
        names = [c.dof_name for c in self.curves] + [t.dof_name for t in self.tracks]
        if len(names) != len(set(names)):
            raise ValidationError(f"clip {self.name!r} has duplicate DoF channels")
        for curve in self.curves:
            if curve.keys[-1].time > self.duration:
                raise ValidationError(
                    f"clip {self.name!r}: curve {curve.dof_name!r} exceeds duration"
                )
        for track in self.tracks:
            if track.events and track.events[-1][0] > self.duration:
                raise ValidationError(
                    f"clip {self.name!r}: track {track.dof_name!r} exceeds duration"
                )
        anchor_names = [a.name for a in self.anchors]
        if len(anchor_names) != len(set(anchor_names)):
            raise ValidationError(f"clip {self.name!r} has duplicate anchor names")
        for anchor in self.anchors:
            if not (0.0 <= anchor.time <= self.duration):
                raise ValidationError(
                    f"clip {self.name!r}: anchor {anchor.name!r} outside [0, duration]"
                )


def _tangents(curve: Curve, i: int) -> tuple[float, float]:
    """Resolved (in, out) tangents of key ``i`` in value/s."""
    keys = curve.keys
    key = keys[i]
    if key.mode is TangentMode.CUSTOM:
        return key.in_tangent, key.out_tangent  # type: ignore[return-value]

    def chord(a: Keyframe, b: Keyframe) -> float:
        return (b.value - a.value) / (b.time - a.time)

    if key.mode is TangentMode.LINEAR:
        t_in = chord(keys[i - 1], key) if i > 0 else 0.0
        t_out = chord(key, keys[i + 1]) if i < len(keys) - 1 else 0.0
        if i == 0:
            t_in = t_out
        if i == len(keys) - 1:
            t_out = t_in
        return t_in, t_out

    # smooth: Catmull-Rom through the neighbours, flat at the endpoints
    if i == 0 or i == len(keys) - 1:
        return 0.0, 0.0
    m = chord(keys[i - 1], keys[i + 1])
    return m, m


def sample_curve(curve: Curve, t: float) -> float:
    """Evaluate the curve at time ``t`` (clamped to the key span)."""
    keys = curve.keys
    if t <= keys[0].time:
        return keys[0].value
    if t >= keys[-1].time:
        return keys[-1].value
    times = [k.time for k in keys]
    i = bisect.bisect_right(times, t) - 1
    k0, k1 = keys[i], keys[i + 1]
    h = k1.time - k0.time
    u = (t - k0.time) / h
    m0 = _tangents(curve, i)[1]
    m1 = _tangents(curve, i + 1)[0]
    u2 = u * u
    u3 = u2 * u
    h00 = 2.0 * u3 - 3.0 * u2 + 1.0
    h10 = u3 - 2.0 * u2 + u
    h01 = -2.0 * u3 + 3.0 * u2
    h11 = u3 - u2
    return h00 * k0.value + h10 * h * m0 + h01 * k1.value + h11 * h * m1


def sample_clip(clip: AnimationClip, t: float) -> dict[str, Union[float, str]]:
    """Sample all channels at ``t``: one entry per curve/track.

    Discrete channels are absent before their first event.
    """
    channels: dict[str, Union[float, str]] = {}
    for curve in clip.curves:
        channels[curve.dof_name] = sample_curve(curve, t)
    for track in clip.tracks:
        label = track.sample(t)
        if label is not None:
            channels[track.dof_name] = label
    return channels


def time_warp(clip: AnimationClip, anchor_targets: dict[str, float]) -> AnimationClip:
    """Remap the clip's time axis so each named anchor lands on its target.

    The map is piecewise linear, fixing 0 and the clip duration.  Key and
    event times are remapped, values are untouched, and custom tangents are
    divided by the local time scale so velocities stay meaningful.
    """
    by_name = {a.name: a for a in clip.anchors}
    for name in anchor_targets:
        if name not in by_name:
            raise ValidationError(f"unknown anchor {name!r} in clip {clip.name!r}")

    moved = sorted(
        ((by_name[name].time, float(target)) for name, target in anchor_targets.items()),
        key=lambda p: p[0],
    )
    points = [(0.0, 0.0)] + moved + [(clip.duration, clip.duration)]
    deduped: list[tuple[float, float]] = []
    for src, dst in points:
        if deduped and deduped[-1] == (src, dst):
            continue
        deduped.append((src, dst))
    for (s0, d0), (s1, d1) in zip(deduped, deduped[1:]):
        if not (s0 < s1 and d0 < d1):
            raise ValidationError(
                "anchor targets must be strictly increasing in source-anchor order "
                f"and inside (0, {clip.duration})"
            )
    points = deduped

    def remap(t: float) -> float:
        for (s0, d0), (s1, d1) in zip(points, points[1:]):
            if t <= s1:
                return d0 + (t - s0) * (d1 - d0) / (s1 - s0)
        return points[-1][1]

    def local_scale(t: float, incoming: bool) -> float:
        # slope of the time map on the segment left (incoming) or right of t
        for (s0, d0), (s1, d1) in zip(points, points[1:]):
            if (incoming and t <= s1) or (not incoming and t < s1):
                return (d1 - d0) / (s1 - s0)
        (s0, d0), (s1, d1) = points[-2], points[-1]
        return (d1 - d0) / (s1 - s0)

    new_curves = []
    for curve in clip.curves:
        new_keys = []
        for key in curve.keys:
            if key.mode is TangentMode.CUSTOM:
                new_keys.append(replace(
                    key,
                    time=remap(key.time),
                    in_tangent=key.in_tangent / local_scale(key.time, incoming=True),
                    out_tangent=key.out_tangent / local_scale(key.time, incoming=False),
                ))
            else:
                new_keys.append(replace(key, time=remap(key.time)))
        new_curves.append(Curve(curve.dof_name, tuple(new_keys)))

    new_tracks = [
        DiscreteTrack(track.dof_name, tuple((remap(t), lab) for t, lab in track.events))
        for track in clip.tracks
    ]
    new_anchors = tuple(Anchor(a.name, remap(a.time)) for a in clip.anchors)
    return AnimationClip(
        name=clip.name,
        duration=clip.duration,
        curves=tuple(new_curves),
        tracks=tuple(new_tracks),
        anchors=new_anchors,
    )


# ---------------------------------------------------------------------------
# clip file format

def load_clip(text: str) -> AnimationClip:
    """Parse a clip file (UTF-8 JSON)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("clip file must be a JSON object")
    try:
        name = data["name"]
        duration = float(data["duration"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("clip file requires 'name' and numeric 'duration'") from None

    curves = []
    for cobj in data.get("curves", []):
        keys = []
        for kobj in cobj.get("keys", []):
            try:
                mode = TangentMode(kobj.get("mode", "smooth"))
            except ValueError:
                raise ParseError(f"bad tangent mode {kobj.get('mode')!r}") from None
            keys.append(Keyframe(
                time=float(kobj["t"]),
                value=float(kobj["v"]),
                mode=mode,
                in_tangent=kobj.get("in"),
                out_tangent=kobj.get("out"),
            ))
        curves.append(Curve(dof_name=cobj["dof"], keys=tuple(keys)))

    tracks = []
    for tobj in data.get("tracks", []):
        events = tuple((float(e["t"]), str(e["label"])) for e in tobj.get("events", []))
        tracks.append(DiscreteTrack(dof_name=tobj["dof"], events=events))

    anchors = tuple(Anchor(a["name"], float(a["t"])) for a in data.get("anchors", []))
    return AnimationClip(
        name=name, duration=duration,
        curves=tuple(curves), tracks=tuple(tracks), anchors=anchors,
    )


def save_clip(clip: AnimationClip) -> str:
    """Inverse of :func:`load_clip`; round-trips all fields losslessly."""
    curves = []
    for curve in clip.curves:
        keys = []
        for key in curve.keys:
            kobj: dict = {"t": key.time, "v": key.value, "mode": key.mode.value}
            if key.in_tangent is not None:
                kobj["in"] = key.in_tangent
            if key.out_tangent is not None:
                kobj["out"] = key.out_tangent
            keys.append(kobj)
        curves.append({"dof": curve.dof_name, "keys": keys})
    tracks = [
        {"dof": t.dof_name, "events": [{"t": et, "label": lab} for et, lab in t.events]}
        for t in clip.tracks
    ]
    anchors = [{"name": a.name, "t": a.time} for a in clip.anchors]
    return json.dumps({
        "name": clip.name,
        "duration": clip.duration,
        "curves": curves,
        "tracks": tracks,
        "anchors": anchors,
    }, indent=2)
