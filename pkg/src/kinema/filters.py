"""Online motion filter: saturates a discontinuous set-point stream into
position-bounded, velocity/acceleration/jerk-limited motion.

The filter runs sample by sample with no look-ahead.  Each step derives the
velocity the raw input demands, shrinks it near the position limits, shapes it
through a smoothness/responsiveness transfer gain, and then drives the output
through a chain of saturated integrators (jerk -> acceleration -> velocity for
the 3rd-order variant).  Two limiter flavours exist: a hard clamp, and a
tanh-based soft limiter whose output stays below half the configured bound,
keeping headroom that absorbs large input jumps without oscillation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from kinema.errors import ValidationError

# Responsiveness is clamped just below 1 so the transfer gain stays defined.
RHO_MAX = 1.0 - 1e-6

# Relative slack stripping float noise off recomputed derivatives.
_REL_EPS = 1e-9


class Order(Enum):
    """Continuity order of the filter output."""

    C1 = 1
    C2 = 2
    C3 = 3


class Limiter(Enum):
    TANH = "tanh"
    HARD = "hard"


def limiter_hard(x: float, k: float) -> float:
    """Exact clamp of ``x`` into [-k, k]."""
    return min(k, max(-k, x))


def limiter_tanh(x: float, k: float) -> float:
    """Soft limiter: odd, strictly increasing, unit slope at 0, |result| < k/2.

    The supremum is k/2, not k; the spare half is headroom for large jumps.
    """
    h = 0.5 * k
    return h * math.tanh(x / h)


def omega(v_in: float, x: float, p_min: float, p_max: float, beta: int) -> float:
    """Shrink the induced velocity as the position approaches its range limit.

    The saturation term is active only when moving toward the nearer limit;
    motion away from a limit always passes through, so the output can leave an
    edge it has reached.  ``beta`` sharpens the falloff: high values behave
    like a hard clamp at the very edge.
    """
    alpha = 0.5 * (p_max - p_min)
    center = p_min + alpha
    if (x > center and v_in > 0.0) or (x < center and v_in < 0.0):
        u = (x - p_min - alpha) / alpha
        # u is in [-1, 1] when x is in range; guard the float edge so the
        # result can never flip sign.
        factor = 1.0 - u ** (2 * beta)
        if factor < 0.0:
            factor = 0.0
        return v_in * factor
    return v_in


def stabilize(v: float, sigma: float, rho: float) -> float:
    """Apply the character transfer gain that eases motion to rest.

    Returns ``v * g`` with ``g = (tanh((|v|/(1-rho))**(1-sigma) - pi) + 1) / 2``.
    The gain is in (0, 1), preserves sign, and is non-decreasing in |v| for
    sigma < 1: small velocities get damped hard (settling), large ones pass
    nearly untouched (responsiveness).  sigma = 1 degenerates to a constant
    gain; rho precipitates the easing by inflating the effective velocity.
    """
    if v == 0.0:
        return 0.0
    if rho > RHO_MAX:
        rho = RHO_MAX
    gain = 0.5 * (math.tanh((abs(v) / (1.0 - rho)) ** (1.0 - sigma) - math.pi) + 1.0)
    return v * gain


def _brake_cap(d: float, a_cap: float, dt: float) -> float:
    """Largest speed toward an edge ``d`` away that can still stop at it.

    Solves v^2 + 3*a*dt*v <= 2*a*d, the discrete-time condition under which
    braking at ``a_cap`` keeps the condition true on every later step and the
    edge is reached with zero speed.
    """
    if d <= 0.0:
        return 0.0
    adt = a_cap * dt
    return 0.5 * (math.sqrt(9.0 * adt * adt + 8.0 * a_cap * d) - 3.0 * adt)


def limit_vector(v: Sequence[float], limit: float, limiter: Limiter) -> list[float]:
    """Limit a 2-D/3-D velocity vector by its magnitude, preserving direction.

    Jointly driven axes (e.g. planar X/Y drives) must be limited together so
    the resulting linear speed, not each component, respects the bound.
    """
    if limit <= 0:
        raise ValidationError(f"vector limit must be positive, got {limit!r}")
    m = math.sqrt(sum(c * c for c in v))
    if m == 0.0:
        return list(v)
    if limiter is Limiter.TANH:
        scale = limiter_tanh(m, limit) / m
    else:
        scale = min(m, limit) / m
    return [c * scale for c in v]


@dataclass(frozen=True)
class FilterParams:
    """Filter configuration: order, limiter flavour, character, and limits.

    ``sigma`` (smoothness) eases oscillation out; ``rho`` (responsiveness)
    speeds the easing up.  ``beta`` is the position-saturation exponent.
    ``stabilizer_enabled=False`` bypasses the transfer gain entirely.
    """

    order: Order
    p_min: float
    p_max: float
    velocity_limit: float
    acceleration_limit: Optional[float] = None
    jerk_limit: Optional[float] = None
    limiter: Limiter = Limiter.TANH
    sigma: float = 0.5
    rho: float = 0.0
    beta: int = 5
    sample_rate: float = 60.0
    stabilizer_enabled: bool = True

    def __post_init__(self) -> None:
        if not (0.0 <= self.sigma <= 1.0):
            raise ValidationError(f"sigma must be in [0, 1], got {self.sigma!r}")
        if not (0.0 <= self.rho <= 1.0):
            raise ValidationError(f"rho must be in [0, 1], got {self.rho!r}")
        if self.rho > RHO_MAX:
            object.__setattr__(self, "rho", RHO_MAX)
        if not (isinstance(self.beta, int) and self.beta >= 1):
            raise ValidationError(f"beta must be a positive integer, got {self.beta!r}")
        if not self.sample_rate > 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if not self.p_min < self.p_max:
            raise ValidationError(
                f"position range [{self.p_min}, {self.p_max}] must have min < max"
            )
        if not self.velocity_limit > 0:
            raise ValidationError("velocity_limit must be positive")
        if self.order is not Order.C1:
            if self.acceleration_limit is None or not self.acceleration_limit > 0:
                raise ValidationError(f"{self.order.name} requires a positive acceleration_limit")
        if self.order is Order.C3:
            if self.jerk_limit is None or not self.jerk_limit > 0:
                raise ValidationError("C3 requires a positive jerk_limit")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate


@dataclass(frozen=True)
class FilterOutput:
    """Applied motion for one step.

    Derivatives are recomputed from the applied position change, so the
    reported sequence is always self-consistent under finite differences.
    ``a`` is 0 for C1 and ``j`` is 0 for C1/C2, where those orders do not
    model the quantity.
    """

    x: float
    v: float
    a: float
    j: float


class FilterState:
    """Per-channel filter history: position, velocity, acceleration, time.

    Owned by a single ticking context; :meth:`step` is strictly sequential per
    instance.  Parameters may be swapped between steps without resetting the
    motion state.
    """

    __slots__ = ("params", "x", "v", "a", "t", "last_applied_jerk",
                 "last_applied_accel")

    def __init__(self, params: FilterParams, x0: float):
        if not math.isfinite(x0):
            raise ValidationError(f"initial position must be finite, got {x0!r}")
        if not (params.p_min <= x0 <= params.p_max):
            raise ValidationError(
                f"initial position {x0} outside range [{params.p_min}, {params.p_max}]"
            )
        self.params = params
        self.x = x0
        self.v = 0.0
        self.a = 0.0
        self.t = 0.0
        self.last_applied_jerk = 0.0
        self.last_applied_accel = 0.0

    def set_params(self, params: FilterParams) -> None:
        """Swap parameters; never resets x/v/a.

        The position is re-clamped into the new range so the state invariant
        survives a range shrink.
        """
        self.params = params
        self.x = min(max(self.x, params.p_min), params.p_max)

    def step(self, set_point: float) -> FilterOutput:
        """Advance one sample toward ``set_point``; returns the applied motion."""
        if not math.isfinite(set_point):
            raise ValidationError(f"set-point must be finite, got {set_point!r}")
        p = self.params
        dt = p.dt
        x_prev = self.x
        v_prev = self.v
        a_prev = self.a
        lim = limiter_tanh if p.limiter is Limiter.TANH else limiter_hard

        v_ind = (set_point - x_prev) / dt
        v_pos = omega(v_ind, x_prev, p.p_min, p.p_max, p.beta)
        v_tgt = stabilize(v_pos, p.sigma, p.rho) if p.stabilizer_enabled else v_pos

        v_cap = p.velocity_limit
        if p.order is Order.C1:
            v_app = lim(v_tgt, v_cap)
        else:
            a_cap = p.acceleration_limit  # type: ignore[assignment]
            if p.order is Order.C2:
                a_des = (v_tgt - v_prev) / dt
                a_app = limiter_hard(lim(a_des, a_cap), a_cap)
            else:
                j_cap = p.jerk_limit  # type: ignore[assignment]
                a_des = (v_tgt - v_prev) / dt
                j_app = lim((a_des - a_prev) / dt, j_cap)
                self.last_applied_jerk = j_app
                a_app = limiter_hard(lim(a_prev + j_app * dt, a_cap), a_cap)
            self.last_applied_accel = a_app
            v_app = limiter_hard(lim(v_prev + a_app * dt, v_cap), v_cap)
            # The velocity-stage limiter decays the carried velocity; keep the
            # implied braking inside the acceleration bound.
            dv = a_cap * dt
            if v_app > v_prev + dv:
                v_app = v_prev + dv
            elif v_app < v_prev - dv:
                v_app = v_prev - dv
            # Braking-feasibility cap toward the range edges: v <= v_brake(d)
            # is invariant under deceleration at a_cap, so the position clamp
            # below never has to truncate motion (which would imply an
            # acceleration beyond the limit).  Inactive away from the edges.
            if v_app > 0.0:
                v_app = min(v_app, _brake_cap(p.p_max - x_prev, a_cap, dt))
            elif v_app < 0.0:
                v_app = -min(-v_app, _brake_cap(x_prev - p.p_min, a_cap, dt))

        x_new = x_prev + v_app * dt
        if x_new > p.p_max:
            x_new = p.p_max
        elif x_new < p.p_min:
            x_new = p.p_min

        v_new = (x_new - x_prev) / dt
        # Strip division noise: mathematically |v_new| <= |v_app| <= v_cap.
        v_new = min(v_cap, max(-v_cap, v_new))
        a_new = (v_new - v_prev) / dt
        j_new = (a_new - a_prev) / dt

        self.x = x_new
        self.v = v_new
        self.t += dt
        if p.order is Order.C1:
            return FilterOutput(x_new, v_new, 0.0, 0.0)
        self.a = a_new
        if p.order is Order.C2:
            return FilterOutput(x_new, v_new, a_new, 0.0)
        return FilterOutput(x_new, v_new, a_new, j_new)


def run(
    params: FilterParams,
    x0: float,
    set_points: Sequence[tuple[float, float]],
    duration: float,
) -> list[FilterOutput]:
    """Run the filter over a time-stamped set-point sequence at a fixed rate.

    Set-points are zero-order held: each tick chases the most recent value at
    or before the tick time (ticks fall at dt, 2*dt, ..., duration).  Before
    the first set-point becomes active the filter holds ``x0``.
    """
    if not set_points:
        raise ValidationError("set-point sequence must be non-empty")
    if duration <= 0:
        raise ValidationError(f"duration must be positive, got {duration!r}")
    for (t0, _), (t1, _) in zip(set_points, set_points[1:]):
        if t1 < t0:
            raise ValidationError("set-point timestamps must be non-decreasing")

    state = FilterState(params, x0)
    dt = params.dt
    n_ticks = round(duration * params.sample_rate)
    outputs: list[FilterOutput] = []
    idx = 0
    current = x0
    for k in range(1, n_ticks + 1):
        t = k * dt
        while idx < len(set_points) and set_points[idx][0] <= t + 1e-12:
            current = set_points[idx][1]
            idx += 1
        outputs.append(state.step(current))
    return outputs
