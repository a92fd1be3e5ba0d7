"""kinema: real-time robot animation engine with kinematically safe motion filtering.

The package turns discontinuous, interactively issued motion commands into
smooth, limit-respecting motion:

- ``embodiment``: robots as sets of expressive degrees of freedom.
- ``filters``: the online C1/C2/C3 motion filter with character shaping.
- ``anim``: keyframe clips, curves, anchors and time warping.
- ``engine``: the programmable block/layer/stage animation pipeline.
- ``validator``: offline limit checking, ghost correction, response metrics.
- ``service``/``cli``: HTTP + socket front ends and the command line.
"""

from kinema.embodiment import (
    Dimension,
    DoFDescriptor,
    EmbodimentSpec,
    KinematronicsProfile,
    ValueKind,
    load_embodiment,
    profile,
    serialize_embodiment,
)
from kinema.filters import (
    FilterOutput,
    FilterParams,
    FilterState,
    Limiter,
    Order,
    limit_vector,
    limiter_hard,
    limiter_tanh,
    omega,
    run,
    stabilize,
)

__version__ = "0.1.0"

__all__ = [
    "Dimension",
    "DoFDescriptor",
    "EmbodimentSpec",
    "FilterOutput",
    "FilterParams",
    "FilterState",
    "KinematronicsProfile",
    "Limiter",
    "Order",
    "ValueKind",
    "limit_vector",
    "limiter_hard",
    "limiter_tanh",
    "load_embodiment",
    "omega",
    "profile",
    "run",
    "serialize_embodiment",
    "stabilize",
    "__version__",
]
