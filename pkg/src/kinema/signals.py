"""Input signal presets and trajectory CSV I/O for the motion filter.

Three stock inputs exercise the filter the way a live pipeline would:

- ``phi_l``: a large instantaneous jump (5 -> -5 at t=2.5, back to 5 at 7.5).
- ``phi_r``: a set-point redrawn uniformly over the position range each second
  (seeded, reproducible).
- ``phi_c``: one axis of a circular path discretized into 50 points, one step
  every 0.2 s; smooth to the eye, stepped to the servo.
"""

from __future__ import annotations

import io
import math
import random
from typing import Sequence

from kinema.errors import ParseError, ValidationError
from kinema.filters import FilterOutput

INPUT_PRESETS = ("phi_l", "phi_r", "phi_c")

_PHI_C_POINTS = 50
_PHI_C_STEP = 0.2
_PHI_C_RADIUS = 5.0


def phi_l(duration: float = 10.0) -> list[tuple[float, float]]:
    points = [(0.0, 5.0)]
    if duration > 2.5:
        points.append((2.5, -5.0))
    if duration > 7.5:
        points.append((7.5, 5.0))
    return points


def phi_r(
    duration: float = 10.0,
    seed: int = 0,
    p_min: float = -10.0,
    p_max: float = 20.0,
) -> list[tuple[float, float]]:
    rng = random.Random(seed)
    return [(float(t), rng.uniform(p_min, p_max)) for t in range(int(math.ceil(duration)))]


def phi_c(duration: float = 10.0) -> list[tuple[float, float]]:
    points = []
    t = 0.0
    j = 0
    while t < duration:
        angle = 2.0 * math.pi * (j % _PHI_C_POINTS) / _PHI_C_POINTS
        points.append((t, _PHI_C_RADIUS * math.sin(angle)))
        j += 1
        t = j * _PHI_C_STEP
    return points


def input_preset(
    name: str,
    duration: float = 10.0,
    seed: int = 0,
    p_min: float = -10.0,
    p_max: float = 20.0,
) -> list[tuple[float, float]]:
    """Build a named input; the filter's x0 is the first set-point value."""
    if name == "phi_l":
        return phi_l(duration)
    if name == "phi_r":
        return phi_r(duration, seed, p_min, p_max)
    if name == "phi_c":
        return phi_c(duration)
    raise ValidationError(f"unknown input preset {name!r}; available: {', '.join(INPUT_PRESETS)}")


def read_trajectory_csv(text: str) -> list[tuple[float, float]]:
    """Parse a `t,s` CSV into a time-stamped set-point sequence."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty trajectory CSV")
    header = [col.strip() for col in lines[0].split(",")]
    if header != ["t", "s"]:
        raise ParseError(f"trajectory CSV must start with header 't,s', got {lines[0]!r}")
    points: list[tuple[float, float]] = []
    for i, line in enumerate(lines[1:], start=2):
        cols = line.split(",")
        if len(cols) != 2:
            raise ParseError(f"line {i}: expected 2 columns, got {len(cols)}")
        try:
            t, s = float(cols[0]), float(cols[1])
        except ValueError:
            raise ParseError(f"line {i}: non-numeric value in {line!r}") from None
        points.append((t, s))
    for (t0, _), (t1, _) in zip(points, points[1:]):
        if t1 < t0:
            raise ParseError("trajectory timestamps must be non-decreasing")
    return points


def write_output_csv(outputs: Sequence[FilterOutput], sample_rate: float) -> str:
    """Render filter outputs as a `t,x,v,a,j` CSV (full float precision)."""
    dt = 1.0 / sample_rate
    buf = io.StringIO()
    buf.write("t,x,v,a,j\n")
    for k, out in enumerate(outputs, start=1):
        buf.write(f"{k * dt!r},{out.x!r},{out.v!r},{out.a!r},{out.j!r}\n")
    return buf.getvalue()


def read_output_csv(text: str) -> tuple[list[float], list[FilterOutput]]:
    """Inverse of :func:`write_output_csv`; returns (times, outputs)."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or [c.strip() for c in lines[0].split(",")] != ["t", "x", "v", "a", "j"]:
        raise ParseError("output CSV must start with header 't,x,v,a,j'")
    times: list[float] = []
    outputs: list[FilterOutput] = []
    for i, line in enumerate(lines[1:], start=2):
        cols = line.split(",")
        if len(cols) != 5:
            raise ParseError(f"line {i}: expected 5 columns, got {len(cols)}")
        try:
            values = [float(c) for c in cols]
        except ValueError:
            raise ParseError(f"line {i}: non-numeric value in {line!r}") from None
        times.append(values[0])
        outputs.append(FilterOutput(*values[1:]))
    return times, outputs
