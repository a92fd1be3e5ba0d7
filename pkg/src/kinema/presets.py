"""Built-in filter parameter groups and their JSON (de)serialization.

The groups pair two sets of physical limits (slow: 20/100/10000, fast:
90/700/50000) with character settings ranging from slow-and-smooth to
fast-and-vivid.  Names encode order and flavour: X3D is the 3rd-order group-D
filter, an ``n`` suffix selects the hard (non-tanh) limiter, and the W group
runs with the stabilizing transfer gain bypassed.

All groups share the default position range [-10, 20] and beta = 5.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Optional

from kinema.errors import ParseError, ValidationError
from kinema.filters import FilterParams, Limiter, Order

_DEFAULT_RANGE = (-10.0, 20.0)
_DEFAULT_BETA = 5

_SLOW = {"velocity_limit": 20.0, "acceleration_limit": 100.0, "jerk_limit": 10000.0}
_FAST = {"velocity_limit": 90.0, "acceleration_limit": 700.0, "jerk_limit": 50000.0}

# group -> (sigma, rho, limits); None character = stabilizer bypassed
_GROUPS: dict[str, tuple[Optional[tuple[float, float]], dict]] = {
    "W": (None, _SLOW),
    "A": ((1.0, 1.0), _SLOW),
    "B": ((0.1, 0.0), _SLOW),
    "C": ((0.1, 0.0), _FAST),
    "D": ((0.95, 1.0), _FAST),
    "E": ((0.95, 0.2), _FAST),
}

# name -> (group, order, limiter); hard variants ship for the 3rd-order
# filters of groups W and A-D, matching the published table exactly
_NAMES: dict[str, tuple[str, Order, Limiter]] = {}
for _group, _orders in (("W", (3,)), ("A", (1, 2, 3)), ("B", (1, 2, 3)),
                        ("C", (1, 2, 3)), ("D", (1, 2, 3)), ("E", (3,))):
    _prefix = "W" if _group == "W" else "X"
    _gtag = "" if _group == "W" else _group
    for _n in _orders:
        _NAMES[f"{_prefix}{_n}{_gtag}"] = (_group, Order(_n), Limiter.TANH)
    if _group != "E":
        _NAMES[f"{_prefix}3{_gtag}n"] = (_group, Order(3), Limiter.HARD)


def preset_names() -> list[str]:
    return sorted(_NAMES)


def is_preset(name: str) -> bool:
    return name in _NAMES


def get_preset(name: str, sample_rate: float = 60.0) -> FilterParams:
    """Build the named parameter group; raises ValidationError if unknown."""
    try:
        group, order, limiter = _NAMES[name]
    except KeyError:
        raise ValidationError(
            f"unknown filter preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    character, limits = _GROUPS[group]
    kwargs = dict(limits)
    if order is Order.C1:
        kwargs.pop("acceleration_limit")
        kwargs.pop("jerk_limit")
    elif order is Order.C2:
        kwargs.pop("jerk_limit")
    if character is None:
        sigma, rho, enabled = 0.0, 0.0, False
    else:
        (sigma, rho), enabled = character, True
    return FilterParams(
        order=order,
        limiter=limiter,
        sigma=sigma,
        rho=rho,
        beta=_DEFAULT_BETA,
        p_min=_DEFAULT_RANGE[0],
        p_max=_DEFAULT_RANGE[1],
        sample_rate=sample_rate,
        stabilizer_enabled=enabled,
        **kwargs,
    )


def params_to_dict(params: FilterParams) -> dict:
    obj = asdict(params)
    obj["order"] = params.order.name
    obj["limiter"] = params.limiter.value
    if obj["acceleration_limit"] is None:
        del obj["acceleration_limit"]
    if obj["jerk_limit"] is None:
        del obj["jerk_limit"]
    return obj


def params_from_dict(obj: dict) -> FilterParams:
    """Parse a filter-parameter object (the --params file format)."""
    if not isinstance(obj, dict):
        raise ParseError("filter parameters must be a JSON object")
    allowed = {"order", "limiter", "sigma", "rho", "beta", "p_min", "p_max",
               "velocity_limit", "acceleration_limit", "jerk_limit",
               "sample_rate", "stabilizer_enabled"}
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"unknown key(s) {sorted(unknown)} in filter parameters")
    for key in ("order", "p_min", "p_max", "velocity_limit"):
        if key not in obj:
            raise ParseError(f"filter parameters missing required key {key!r}")
    try:
        order = Order[obj["order"]] if isinstance(obj["order"], str) else Order(obj["order"])
    except (KeyError, ValueError):
        raise ParseError(f"bad order {obj['order']!r} (expected C1, C2 or C3)") from None
    limiter_name = obj.get("limiter", "tanh")
    try:
        limiter = Limiter(limiter_name)
    except ValueError:
        raise ParseError(f"bad limiter {limiter_name!r} (expected tanh or hard)") from None
    kwargs = {k: obj[k] for k in allowed & set(obj) if k not in ("order", "limiter")}
    if "beta" in kwargs:
        beta = kwargs["beta"]
        if isinstance(beta, float) and beta.is_integer():
            kwargs["beta"] = int(beta)
    return FilterParams(order=order, limiter=limiter, **kwargs)


def params_from_text(text: str) -> FilterParams:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return params_from_dict(obj)
