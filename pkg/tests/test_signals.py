import pytest

from kinema.errors import ParseError, ValidationError
from kinema.filters import Limiter, Order
from kinema.presets import (
    get_preset,
    params_from_text,
    params_to_dict,
    preset_names,
)
from kinema.signals import (
    input_preset,
    phi_c,
    phi_l,
    phi_r,
    read_output_csv,
    read_trajectory_csv,
    write_output_csv,
)
from kinema.filters import run


def test_phi_l_schedule():
    assert phi_l() == [(0.0, 5.0), (2.5, -5.0), (7.5, 5.0)]


def test_phi_r_seeded_and_in_range():
    a = phi_r(10.0, seed=7)
    b = phi_r(10.0, seed=7)
    c = phi_r(10.0, seed=8)
    assert a == b != c
    assert len(a) == 10
    assert [t for t, _ in a] == [float(i) for i in range(10)]
    assert all(-10.0 <= s <= 20.0 for _, s in a)


def test_phi_c_fifty_points_every_fifth_second():
    pts = phi_c(10.0)
    assert len(pts) == 50
    assert pts[0] == (0.0, 0.0)
    assert pts[1][0] == pytest.approx(0.2)
    radius = max(s for _, s in pts)
    assert radius == pytest.approx(5.0, rel=0.01)
    # one full revolution over the 10 s
    assert pts[25][1] == pytest.approx(0.0, abs=1e-9)


def test_unknown_input_preset():
    with pytest.raises(ValidationError):
        input_preset("phi_x")


def test_table_groups():
    names = preset_names()
    for expected in ("W3", "W3n", "X1A", "X2A", "X3A", "X3An", "X3B", "X3C",
                     "X3D", "X3Dn", "X3E"):
        assert expected in names

    x3d = get_preset("X3D")
    assert x3d.order is Order.C3 and x3d.limiter is Limiter.TANH
    assert (x3d.sigma, x3d.velocity_limit, x3d.acceleration_limit, x3d.jerk_limit) == \
        (0.95, 90.0, 700.0, 50000.0)
    assert x3d.rho == pytest.approx(1.0, abs=1e-5)  # clamped just below 1

    x3a = get_preset("X3A")
    assert (x3a.sigma, x3a.velocity_limit, x3a.acceleration_limit, x3a.jerk_limit) == \
        (1.0, 20.0, 100.0, 10000.0)

    x3e = get_preset("X3E")
    assert (x3e.sigma, x3e.rho) == (0.95, 0.2)

    w3n = get_preset("W3n")
    assert w3n.limiter is Limiter.HARD and not w3n.stabilizer_enabled

    x1a = get_preset("X1A")
    assert x1a.order is Order.C1 and x1a.acceleration_limit is None


def test_unknown_group():
    with pytest.raises(ValidationError, match="X9Z"):
        get_preset("X9Z")


def test_params_json_round_trip():
    import json

    p = get_preset("X3B", sample_rate=100.0)
    again = params_from_text(json.dumps(params_to_dict(p)))
    assert again == p


def test_params_file_rejects_unknown_keys():
    with pytest.raises(ParseError, match="unknown"):
        params_from_text('{"order": "C1", "p_min": 0, "p_max": 1, '
                         '"velocity_limit": 1, "wobble": 2}')


def test_output_csv_round_trip():
    p = get_preset("X3B")
    outs = run(p, 5.0, phi_l(), 2.0)
    text = write_output_csv(outs, 60.0)
    lines = text.strip().splitlines()
    assert lines[0] == "t,x,v,a,j"
    assert len(lines) == 121
    times, parsed = read_output_csv(text)
    assert parsed == outs  # repr round-trips doubles exactly
    assert times[0] == pytest.approx(1 / 60)


def test_trajectory_csv_parsing():
    pts = read_trajectory_csv("t,s\n0,1.5\n2.5,-3\n")
    assert pts == [(0.0, 1.5), (2.5, -3.0)]
    with pytest.raises(ParseError):
        read_trajectory_csv("time,value\n0,1\n")
    with pytest.raises(ParseError):
        read_trajectory_csv("t,s\n0,1\n1,2,3\n")
    with pytest.raises(ParseError):
        read_trajectory_csv("t,s\n1,1\n0,2\n")
    with pytest.raises(ParseError):
        read_trajectory_csv("")
