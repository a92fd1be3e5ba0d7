import random

import pytest

from kinema.anim import (
    AnimationClip,
    Anchor,
    Curve,
    DiscreteTrack,
    Keyframe,
    TangentMode,
    load_clip,
    sample_clip,
    sample_curve,
    save_clip,
    time_warp,
)
from kinema.errors import ValidationError

# ---------------------------------------------------------------------------
# oracle: independent Hermite evaluation over resolved (value, tangent) pairs


def hermite(p0, m0, p1, m1, t0, t1, t):
    h = t1 - t0
    u = (t - t0) / h
    return ((2 * u**3 - 3 * u**2 + 1) * p0
            + (u**3 - 2 * u**2 + u) * h * m0
            + (-2 * u**3 + 3 * u**2) * p1
            + (u**3 - u**2) * h * m1)


def resolved_tangents(keys, i):
    key = keys[i]
    if key.mode is TangentMode.CUSTOM:
        return key.in_tangent, key.out_tangent

    def chord(a, b):
        return (b.value - a.value) / (b.time - a.time)

    if key.mode is TangentMode.LINEAR:
        t_in = chord(keys[i - 1], key) if i > 0 else None
        t_out = chord(key, keys[i + 1]) if i < len(keys) - 1 else None
        return (t_in if t_in is not None else t_out,
                t_out if t_out is not None else t_in)
    if i == 0 or i == len(keys) - 1:
        return 0.0, 0.0
    m = chord(keys[i - 1], keys[i + 1])
    return m, m


def oracle_sample(curve, t):
    keys = curve.keys
    if t <= keys[0].time:
        return keys[0].value
    if t >= keys[-1].time:
        return keys[-1].value
    for i in range(len(keys) - 1):
        if keys[i].time <= t <= keys[i + 1].time:
            m0 = resolved_tangents(keys, i)[1]
            m1 = resolved_tangents(keys, i + 1)[0]
            return hermite(keys[i].value, m0, keys[i + 1].value, m1,
                           keys[i].time, keys[i + 1].time, t)
    raise AssertionError


def random_curve(rng, n_keys=None):
    n = n_keys or rng.randint(1, 8)
    times = sorted(rng.uniform(0, 10) for _ in range(n))
    while any(b - a < 1e-3 for a, b in zip(times, times[1:])):
        times = sorted(rng.uniform(0, 10) for _ in range(n))
    keys = []
    for t in times:
        mode = rng.choice(list(TangentMode))
        kw = {}
        if mode is TangentMode.CUSTOM:
            kw = {"in_tangent": rng.uniform(-50, 50), "out_tangent": rng.uniform(-50, 50)}
        keys.append(Keyframe(t, rng.uniform(-100, 100), mode, **kw))
    return Curve("j1", tuple(keys))


# ---------------------------------------------------------------------------


def test_linear_midpoint():
    curve = Curve("j1", (
        Keyframe(0.0, 0.0, TangentMode.LINEAR),
        Keyframe(1.0, 90.0, TangentMode.LINEAR),
    ))
    assert sample_curve(curve, 0.5) == pytest.approx(45.0, abs=1e-12)


def test_smooth_two_keys_flat_endpoints():
    curve = Curve("j1", (
        Keyframe(0.0, 0.0, TangentMode.SMOOTH),
        Keyframe(1.0, 90.0, TangentMode.SMOOTH),
    ))
    assert sample_curve(curve, 0.5) == pytest.approx(45.0, abs=1e-12)
    # second-order one-sided stencil: cancels the curvature term that a plain
    # difference quotient picks up at a flat endpoint
    h = 1e-6
    f = lambda t: sample_curve(curve, t)
    slope0 = (-3 * f(0.0) + 4 * f(h) - f(2 * h)) / (2 * h)
    slope1 = (3 * f(1.0) - 4 * f(1.0 - h) + f(1.0 - 2 * h)) / (2 * h)
    assert abs(slope0) < 1e-6
    assert abs(slope1) < 1e-6


def test_anticipation_dip_from_custom_tangent():
    # pull-back before a rise: negative out-tangent on the first key
    curve = Curve("j1", (
        Keyframe(0.0, 0.0, TangentMode.CUSTOM, in_tangent=0.0, out_tangent=-120.0),
        Keyframe(1.0, 90.0, TangentMode.CUSTOM, in_tangent=0.0, out_tangent=0.0),
    ))
    ts = [i * 1e-4 for i in range(10001)]
    dense_min = min(sample_curve(curve, t) for t in ts)
    assert dense_min < 0
    # frozen from the dense oracle at 1e-4 resolution
    assert dense_min == pytest.approx(-7.6444440111, rel=1e-9)


def test_exact_at_keys_and_clamped_outside():
    rng = random.Random(42)
    for _ in range(50):
        curve = random_curve(rng)
        for key in curve.keys:
            assert sample_curve(curve, key.time) == pytest.approx(key.value, abs=1e-9)
        assert sample_curve(curve, curve.keys[0].time - 5) == curve.keys[0].value
        assert sample_curve(curve, curve.keys[-1].time + 5) == curve.keys[-1].value


def test_matches_dense_oracle_on_random_curves():
    rng = random.Random(7)
    for _ in range(100):
        curve = random_curve(rng)
        t0, t1 = curve.keys[0].time, curve.keys[-1].time
        for i in range(200):
            t = t0 + (t1 - t0) * i / 199 if t1 > t0 else t0
            a = sample_curve(curve, t)
            b = oracle_sample(curve, t)
            assert abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def test_linear_mode_is_exact_linear_interpolation():
    rng = random.Random(9)
    for _ in range(100):
        t0, t1 = sorted((rng.uniform(0, 10), rng.uniform(0, 10)))
        if t1 - t0 < 1e-3:
            continue
        v0, v1 = rng.uniform(-100, 100), rng.uniform(-100, 100)
        curve = Curve("j1", (
            Keyframe(t0, v0, TangentMode.LINEAR),
            Keyframe(t1, v1, TangentMode.LINEAR),
        ))
        for i in range(50):
            t = t0 + (t1 - t0) * i / 49
            u = (t - t0) / (t1 - t0)
            assert abs(sample_curve(curve, t) - ((1 - u) * v0 + u * v1)) < 1e-12


def test_continuity_at_random_points():
    rng = random.Random(3)
    for _ in range(30):
        curve = random_curve(rng, n_keys=5)
        t0, t1 = curve.keys[0].time, curve.keys[-1].time
        h = 1e-6
        for i in range(100):
            t = t0 + (t1 - t0 - h) * i / 99
            jump = abs(sample_curve(curve, t + h) - sample_curve(curve, t))
            assert jump < 1e-2  # slope bound: Hermite stays within ~1.5x tangents


def test_curve_invariants():
    with pytest.raises(ValidationError):
        Curve("j1", ())
    with pytest.raises(ValidationError):
        Curve("j1", (Keyframe(0, 0), Keyframe(0, 1)))
    with pytest.raises(ValidationError):
        Keyframe(0, 0, TangentMode.CUSTOM, in_tangent=1.0)  # missing out


# ---------------------------------------------------------------------------
# clips


def make_clip():
    return AnimationClip(
        name="wave",
        duration=4.0,
        curves=(
            Curve("j1", (
                Keyframe(0.0, 0.0, TangentMode.SMOOTH),
                Keyframe(1.0, 1.0, TangentMode.SMOOTH),
                Keyframe(3.0, -1.0, TangentMode.LINEAR),
            )),
            Curve("j2", (
                Keyframe(0.0, 2.0, TangentMode.CUSTOM, in_tangent=0.0, out_tangent=1.0),
                Keyframe(4.0, 5.0, TangentMode.CUSTOM, in_tangent=-2.0, out_tangent=0.0),
            )),
        ),
        tracks=(DiscreteTrack("screen", ((0.5, "happy"), (2.0, "sad"))),),
        anchors=(Anchor("beat", 1.0), Anchor("end_pose", 3.0)),
    )


def test_sample_clip_at_zero_and_beyond_duration():
    clip = make_clip()
    paf0 = sample_clip(clip, 0.0)
    assert paf0["j1"] == 0.0 and paf0["j2"] == 2.0
    assert "screen" not in paf0  # before first event
    paf_end = sample_clip(clip, 99.0)
    assert paf_end["j1"] == -1.0 and paf_end["j2"] == 5.0
    assert paf_end["screen"] == "sad"


def test_sample_clip_discrete_hold():
    clip = make_clip()
    assert sample_clip(clip, 1.0)["screen"] == "happy"
    assert sample_clip(clip, 1.99)["screen"] == "happy"
    assert sample_clip(clip, 2.0)["screen"] == "sad"


def test_clip_invariants():
    with pytest.raises(ValidationError, match="duration"):
        AnimationClip("c", 0.5, curves=(Curve("j1", (Keyframe(1.0, 0),)),))
    with pytest.raises(ValidationError, match="anchor"):
        AnimationClip("c", 1.0, anchors=(Anchor("a", 2.0),))
    with pytest.raises(ValidationError, match="duplicate"):
        AnimationClip("c", 1.0, anchors=(Anchor("a", 0.1), Anchor("a", 0.2)))


def test_clip_file_round_trip_lossless():
    clip = make_clip()
    again = load_clip(save_clip(clip))
    assert again == clip


# ---------------------------------------------------------------------------
# time_warp


def test_time_warp_identity():
    clip = make_clip()
    warped = time_warp(clip, {"beat": 1.0, "end_pose": 3.0})
    for c0, c1 in zip(clip.curves, warped.curves):
        for k0, k1 in zip(c0.keys, c1.keys):
            assert abs(k0.time - k1.time) < 1e-12
            assert k0.value == k1.value


def test_time_warp_single_anchor_piecewise_stretch():
    clip = make_clip()
    warped = time_warp(clip, {"beat": 2.0})

    def remap(t):
        return t * 2.0 if t <= 1.0 else 2.0 + (t - 1.0) * (2.0 / 3.0)

    # anchor lands exactly; keys remap per the independent map; values survive
    assert dict((a.name, a.time) for a in warped.anchors)["beat"] == 2.0
    for c0, c1 in zip(clip.curves, warped.curves):
        for k0, k1 in zip(c0.keys, c1.keys):
            assert k1.time == pytest.approx(remap(k0.time), abs=1e-12)
            assert k1.value == k0.value
    for tr0, tr1 in zip(clip.tracks, warped.tracks):
        for (t0, lab0), (t1, lab1) in zip(tr0.events, tr1.events):
            assert t1 == pytest.approx(remap(t0), abs=1e-12)
            assert lab0 == lab1
    # dense comparison against the independently remapped original
    for curve0, curve1 in zip(clip.curves, warped.curves):
        if any(k.mode is not TangentMode.LINEAR for k in curve0.keys):
            continue
        for i in range(400):
            t = 4.0 * i / 399
            assert sample_curve(curve1, remap(t)) == pytest.approx(
                sample_curve(curve0, t), abs=1e-9)


def test_time_warp_custom_tangents_rescaled():
    clip = make_clip()
    warped = time_warp(clip, {"beat": 2.0})
    j2 = next(c for c in warped.curves if c.dof_name == "j2")
    # first key sits left of the anchor: local scale 2 -> slopes halve
    assert j2.keys[0].out_tangent == pytest.approx(0.5)
    # last key sits right of the anchor: local scale 2/3 -> slopes x1.5
    assert j2.keys[1].in_tangent == pytest.approx(-3.0)


def test_time_warp_errors():
    clip = make_clip()
    with pytest.raises(ValidationError, match="unknown anchor"):
        time_warp(clip, {"nope": 1.0})
    with pytest.raises(ValidationError, match="increasing"):
        time_warp(clip, {"beat": 3.5, "end_pose": 1.0})
