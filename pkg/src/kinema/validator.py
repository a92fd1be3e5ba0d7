"""Offline trajectory validation and correction.

``check_trajectory`` flags every sample whose position leaves its DoF range
or whose finite-difference velocity/acceleration/jerk exceeds the DoF's
limits (the classic red/orange/pink highlighting, encoded as violation
kinds).  ``ghost`` runs the motion filter over the authored samples to
produce the limit-compliant shadow trajectory that is the exportable
artifact.  ``measure_response`` extracts step-response metrics (overshoot,
settle time, oscillation, sustained velocity) used to compare filter
characters.

All functions are pure over immutable inputs; parallelize across DoFs freely.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from kinema.embodiment import DoFDescriptor, EmbodimentSpec, ValueKind
from kinema.errors import ValidationError
from kinema.filters import FilterOutput, FilterParams, Order, run

# Exceedance below this relative slack is float noise, not a violation;
# limit-exact trajectories therefore pass (strict-inequality convention).
_REL_EPS = 1e-9


class ViolationKind(Enum):
    POSITION = "position"
    VELOCITY = "velocity"
    ACCELERATION = "acceleration"
    JERK = "jerk"


@dataclass(frozen=True)
class Violation:
    dof_name: str
    sample_index: int
    time: float
    kind: ViolationKind
    actual: float
    limit: float


@dataclass
class GhostReport:
    corrected: dict[str, list[FilterOutput]]
    max_deviation: dict[str, float]
    residual_violations: list[Violation]


@dataclass(frozen=True)
class ResponseMetrics:
    overshoot_fraction: float
    settle_time: float
    oscillation_count: int
    sustained_velocity: float


def _exceeds(actual: float, limit: float) -> bool:
    return abs(actual) > limit * (1.0 + _REL_EPS)


def check_trajectory(
    samples: dict[str, Sequence[float]],
    spec: EmbodimentSpec,
    sample_rate: float,
) -> list[Violation]:
    """Classify kinematic-limit violations over uniformly sampled series.

    Derivatives use forward differences at the sampling rate.  A sample
    violates only when it exceeds the limit strictly (beyond float noise), so
    limit-exact trajectories are compliant.  Results are ordered by time,
    then by the embodiment's DoF order.
    """
    if sample_rate <= 0:
        raise ValidationError(f"sample_rate must be positive, got {sample_rate!r}")
    dt = 1.0 / sample_rate
    lengths = {len(series) for series in samples.values()}
    if len(lengths) > 1:
        raise ValidationError(f"mismatched sample lengths: {sorted(lengths)}")
    order = {dof.name: i for i, dof in enumerate(spec.dofs)}
    violations: list[Violation] = []
    for name, series in samples.items():
        if name not in spec:
            raise ValidationError(f"unknown DoF {name!r}")
        dof = spec[name]
        if dof.kind is not ValueKind.CONTINUOUS:
            continue
        violations.extend(_check_series(name, series, dof, dt))
    violations.sort(key=lambda v: (v.time, order[v.dof_name]))
    return violations


def _check_series(
    name: str, series: Sequence[float], dof: DoFDescriptor, dt: float
) -> list[Violation]:
    out: list[Violation] = []
    p_min, p_max = dof.p_min, dof.p_max
    slack = _REL_EPS * max(1.0, abs(p_min), abs(p_max))
    for i, x in enumerate(series):
        if x > p_max + slack or x < p_min - slack:
            limit = p_max if x > p_max else p_min
            out.append(Violation(name, i, i * dt, ViolationKind.POSITION, x, limit))
    limits = dof.limits
    if limits is None:
        return out
    v = [(series[i + 1] - series[i]) / dt for i in range(len(series) - 1)]
    if limits.velocity is not None:
        for i, value in enumerate(v):
            if _exceeds(value, limits.velocity):
                out.append(Violation(name, i, i * dt, ViolationKind.VELOCITY,
                                     value, limits.velocity))
    a = [(v[i + 1] - v[i]) / dt for i in range(len(v) - 1)]
    if limits.acceleration is not None:
        for i, value in enumerate(a):
            if _exceeds(value, limits.acceleration):
                out.append(Violation(name, i, i * dt, ViolationKind.ACCELERATION,
                                     value, limits.acceleration))
    if limits.jerk is not None:
        j = [(a[i + 1] - a[i]) / dt for i in range(len(a) - 1)]
        for i, value in enumerate(j):
            if _exceeds(value, limits.jerk):
                out.append(Violation(name, i, i * dt, ViolationKind.JERK,
                                     value, limits.jerk))
    return out


def params_for_dof(base: FilterParams, dof: DoFDescriptor) -> FilterParams:
    """Specialize filter parameters to one DoF: its range and limits override
    the base, and the order drops to what the available limits support."""
    limits = dof.limits
    order = base.order
    velocity = base.velocity_limit
    acceleration = base.acceleration_limit
    jerk = base.jerk_limit
    if limits is not None:
        if limits.velocity is not None:
            velocity = limits.velocity
        acceleration = limits.acceleration or acceleration
        jerk = limits.jerk or jerk
    if order is Order.C3 and jerk is None:
        order = Order.C2
    if order is not Order.C1 and acceleration is None:
        order = Order.C1
    return replace(
        base,
        order=order,
        p_min=dof.p_min,
        p_max=dof.p_max,
        velocity_limit=velocity,
        acceleration_limit=None if order is Order.C1 else acceleration,
        jerk_limit=jerk if order is Order.C3 else None,
    )


def ghost(
    samples: dict[str, Sequence[float]],
    spec: EmbodimentSpec,
    base_params: FilterParams,
    sample_rate: float,
) -> GhostReport:
    """Filter the authored samples into the limit-compliant shadow trajectory.

    The corrected trajectory, not the original, is the exportable artifact.
    Per DoF, the original series is the set-point stream, the first sample
    (clamped into range) is the initial position, and residual violations are
    re-checked on the result with the same embodiment.
    """
    if sample_rate <= 0:
        raise ValidationError(f"sample_rate must be positive, got {sample_rate!r}")
    corrected: dict[str, list[FilterOutput]] = {}
    deviations: dict[str, float] = {}
    ghost_series: dict[str, list[float]] = {}
    dt = 1.0 / sample_rate
    for name, series in samples.items():
        if name not in spec:
            raise ValidationError(f"unknown DoF {name!r}")
        dof = spec[name]
        if dof.kind is not ValueKind.CONTINUOUS or not len(series):
            continue
        params = replace(params_for_dof(base_params, dof), sample_rate=sample_rate)
        x0 = min(max(series[0], params.p_min), params.p_max)
        set_points = [(i * dt, s) for i, s in enumerate(series)]
        duration = (len(series) - 1) * dt
        if duration <= 0:
            outputs = [FilterOutput(x0, 0.0, 0.0, 0.0)]
        else:
            outputs = [FilterOutput(x0, 0.0, 0.0, 0.0)]
            outputs.extend(run(params, x0, set_points, duration))
        corrected[name] = outputs
        deviations[name] = max(
            abs(orig - out.x) for orig, out in zip(series, outputs)
        )
        ghost_series[name] = [out.x for out in outputs]
    residual = check_trajectory(ghost_series, spec, sample_rate) if ghost_series else []
    return GhostReport(corrected=corrected, max_deviation=deviations,
                       residual_violations=residual)


def measure_response(
    outputs: Sequence[FilterOutput],
    sample_rate: float,
    step_from: float,
    step_to: float,
    step_at: float,
    window_end: Optional[float] = None,
    tolerance_fraction: float = 0.01,
) -> ResponseMetrics:
    """Step-response metrics over the window [step_at, window_end].

    ``settle_time`` is measured from the step instant and is infinite when
    the trace never stays inside the tolerance band.  ``sustained_velocity``
    is the median |v| over the longest stretch where |v| varies by less than
    10% (ignoring samples below 5% of the peak, which are rest).
    """
    if step_from == step_to:
        raise ValidationError("step must change value")
    dt = 1.0 / sample_rate
    t_end = window_end if window_end is not None else (len(outputs) + 1) * dt
    idx = [k for k in range(1, len(outputs) + 1) if step_at <= k * dt <= t_end]
    if not idx:
        raise ValidationError("step not found in the output time range")
    size = abs(step_to - step_from)
    sign = math.copysign(1.0, step_to - step_from)

    peak_beyond = max(sign * (outputs[k - 1].x - step_to) for k in idx)
    overshoot = max(0.0, peak_beyond) / size

    tol = tolerance_fraction * size
    last_outside = None
    for k in idx:
        if abs(outputs[k - 1].x - step_to) >= tol:
            last_outside = k
    if last_outside is None:
        settle = 0.0
    elif last_outside == idx[-1]:
        settle = math.inf
    else:
        settle = last_outside * dt - step_at

    crossed = False
    oscillations = 0
    prev_sign = 0
    for k in idx:
        out = outputs[k - 1]
        if not crossed and sign * (out.x - step_to) >= 0.0:
            crossed = True
        if crossed and out.v != 0.0:
            s = 1 if out.v > 0 else -1
            if prev_sign != 0 and s != prev_sign:
                oscillations += 1
            prev_sign = s

    speeds = [abs(outputs[k - 1].v) for k in idx]
    sustained = _sustained_velocity(speeds)
    return ResponseMetrics(overshoot, settle, oscillations, sustained)


def _sustained_velocity(speeds: Sequence[float]) -> float:
    peak = max(speeds, default=0.0)
    if peak <= 0.0:
        return 0.0
    floor = 0.05 * peak
    best_len, best_span = 0, (0, 0)
    i, n = 0, len(speeds)
    while i < n:
        if speeds[i] <= floor:
            i += 1
            continue
        lo = hi = speeds[i]
        j = i
        while j + 1 < n and speeds[j + 1] > floor:
            nlo, nhi = min(lo, speeds[j + 1]), max(hi, speeds[j + 1])
            if nhi - nlo >= 0.1 * nhi:
                break
            lo, hi = nlo, nhi
            j += 1
        if j - i + 1 > best_len:
            best_len, best_span = j - i + 1, (i, j)
        i = i + 1 if j == i else j
    if best_len == 0:
        return 0.0
    s, e = best_span
    return statistics.median(speeds[s:e + 1])


def violations_to_jsonl(violations: Sequence[Violation]) -> str:
    """Report format: one violation per line, then a summary object."""
    lines = []
    for v in violations:
        lines.append(json.dumps({
            "dof": v.dof_name, "index": v.sample_index, "t": v.time,
            "kind": v.kind.value, "actual": v.actual, "limit": v.limit,
        }))
    by_kind: dict[str, int] = {}
    by_dof: dict[str, int] = {}
    for v in violations:
        by_kind[v.kind.value] = by_kind.get(v.kind.value, 0) + 1
        by_dof[v.dof_name] = by_dof.get(v.dof_name, 0) + 1
    lines.append(json.dumps({
        "summary": {"total": len(violations), "by_kind": by_kind, "by_dof": by_dof}
    }))
    return "\n".join(lines) + "\n"
