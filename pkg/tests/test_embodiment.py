import json

import pytest

from kinema.data import read_text
from kinema.embodiment import (
    Dimension,
    load_embodiment,
    profile,
    serialize_embodiment,
)
from kinema.errors import ParseError, ValidationError


def make_file(dofs):
    return json.dumps({"name": "rig", "dofs": dofs})

HINGE = {
    "name": "j1", "dimension": "stationary", "kind": "continuous",
    "range": [-1.57, 1.57],
    "limits": {"velocity": 2.0, "acceleration": 10.0, "jerk": 100.0},
}


def test_single_hinge_maps_fields():
    spec = load_embodiment(make_file([HINGE]))
    assert spec.name == "rig"
    dof = spec["j1"]
    assert dof.dimension is Dimension.STATIONARY
    assert dof.range == (-1.57, 1.57)
    assert dof.limits.velocity == 2.0
    assert dof.limits.acceleration == 10.0
    assert dof.limits.jerk == 100.0
    assert profile(spec).as_tuple() == (1, 0, 0, 0)


def test_degenerate_range_names_dof():
    bad = dict(HINGE, range=[5, 5])
    with pytest.raises(ValidationError, match="j1"):
        load_embodiment(make_file([bad]))


def test_nao_h25_profile():
    spec = load_embodiment(read_text("nao_h25.json"))
    assert profile(spec).as_tuple() == (25, 3, 5, 2)


def test_empty_embodiment_profile():
    spec = load_embodiment(make_file([]))
    assert profile(spec).as_tuple() == (0, 0, 0, 0)


def test_profile_counts_spatial_and_display():
    dofs = [
        {"name": "yaw", "dimension": "spatial", "kind": "continuous",
         "range": [-3, 3], "axis": "yaw"},
        {"name": "screen", "dimension": "display", "kind": "discrete",
         "labels": ["happy", "sad"]},
    ]
    assert profile(load_embodiment(make_file(dofs))).as_tuple() == (0, 1, 1, 0)


def test_profile_invariant_under_reordering():
    spec = load_embodiment(read_text("nao_h25.json"))
    reordered = json.loads(serialize_embodiment(spec))
    reordered["dofs"] = list(reversed(reordered["dofs"]))
    spec2 = load_embodiment(json.dumps(reordered))
    assert profile(spec2).as_tuple() == profile(spec).as_tuple()


def test_round_trip_identity():
    spec = load_embodiment(read_text("nao_h25.json"))
    again = load_embodiment(serialize_embodiment(spec))
    assert again == spec


def test_duplicate_names_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        load_embodiment(make_file([HINGE, HINGE]))


def test_nonpositive_limit_rejected():
    bad = dict(HINGE, limits={"velocity": 0.0})
    with pytest.raises(ValidationError, match="velocity"):
        load_embodiment(make_file([bad]))


def test_discrete_with_limits_rejected():
    bad = {"name": "scr", "dimension": "display", "kind": "discrete",
           "labels": ["a"], "limits": {"velocity": 1.0}}
    with pytest.raises(ValidationError, match="scr"):
        load_embodiment(make_file([bad]))


def test_discrete_requires_labels():
    bad = {"name": "scr", "dimension": "display", "kind": "discrete", "labels": []}
    with pytest.raises(ValidationError, match="scr"):
        load_embodiment(make_file([bad]))


def test_spatial_requires_axis_and_unique_axes():
    no_axis = {"name": "x1", "dimension": "spatial", "kind": "continuous",
               "range": [-1, 1]}
    with pytest.raises(ValidationError, match="axis"):
        load_embodiment(make_file([no_axis]))
    a = dict(no_axis, axis="x")
    b = dict(no_axis, name="x2", axis="x")
    with pytest.raises(ValidationError, match="axis"):
        load_embodiment(make_file([a, b]))


def test_unknown_keys_rejected():
    with pytest.raises(ParseError, match="unknown key"):
        load_embodiment(json.dumps({"name": "r", "dofs": [], "extra": 1}))
    with pytest.raises(ParseError, match="unknown key"):
        load_embodiment(make_file([dict(HINGE, wild=True)]))
    with pytest.raises(ParseError, match="unknown key"):
        load_embodiment(make_file([dict(HINGE, limits={"velocity": 1, "snap": 2})]))


def test_malformed_json_is_parse_error():
    with pytest.raises(ParseError):
        load_embodiment("{not json")


@pytest.mark.parametrize("mutation", [
    {"range": [2, 1]},
    {"range": "wide"},
    {"dimension": "sideways"},
    {"kind": "fuzzy"},
    {"axis": "diagonal"},
    {"limits": {"velocity": -3}},
    {"labels": [1, 2]},
])
def test_fuzzed_malformed_dofs_error_not_invalid_spec(mutation):
    bad = dict(HINGE)
    bad.update(mutation)
    with pytest.raises((ParseError, ValidationError)):
        load_embodiment(make_file([bad]))
