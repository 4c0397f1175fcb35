"""Parameter file loading: defaults, overrides, rejection, round-trips."""

import json
import math

import numpy as np
import pytest

from footplan.lattice import LatticeParams
from footplan.params import ParamsBundle, ParamsError, load_params, params_to_dict, params_to_json


def test_empty_document_gives_defaults():
    bundle = load_params("{}")
    assert bundle.lattice == LatticeParams()
    assert bundle.checker.max_reach == 0.5
    assert bundle.cost.inflation == 1.5
    assert bundle.wiggle.inset_distance == 0.02
    assert bundle.goal_tolerance == 0.2
    assert bundle.goal_tolerance_yaw == 0.3
    assert set(bundle.foot.sole.vertices) == {
        (0.11, 0.055),
        (-0.11, 0.055),
        (-0.11, -0.055),
        (0.11, -0.055),
    }


def test_overrides_apply_to_each_group():
    doc = {
        "xy_resolution": 0.05,
        "yaw_resolution": math.tau / 8.0,
        "expansion_max_length": 0.35,
        "max_forward": 0.4,
        "w_distance": 2.0,
        "wiggle_max_translation": 0.03,
        "wiggle_weights": [2.0, 2.0, 0.1],
        "goal_tolerance": 0.1,
        "stance_clearance": [[0.1, 0.05], [-0.1, 0.05], [-0.1, -0.05], [0.1, -0.05]],
        "foot_sole": [[0.1, 0.06], [-0.1, 0.06], [-0.1, -0.06], [0.1, -0.06]],
    }
    bundle = load_params(json.dumps(doc))
    assert bundle.lattice.xy_resolution == 0.05
    assert bundle.lattice.yaw_count == 8
    assert bundle.expansion.max_length == 0.35
    assert bundle.checker.max_forward == 0.4
    assert bundle.cost.w_distance == 2.0
    assert bundle.wiggle.max_translation == 0.03
    assert np.allclose(bundle.wiggle.weights, np.diag([2.0, 2.0, 0.1]))
    assert bundle.goal_tolerance == 0.1
    assert bundle.checker.stance_clearance.vertices[0] == (0.1, 0.05)
    assert bundle.foot.sole.vertices[0] == (0.1, 0.06)


def test_json_round_trip_is_byte_identical():
    doc = {"xy_resolution": 0.05, "w_yaw": 0.7, "goal_tolerance_yaw": 0.25}
    text = params_to_json(load_params(json.dumps(doc)))
    assert params_to_json(load_params(text)) == text


def test_dict_round_trip_preserves_every_value():
    bundle = load_params({"expansion_max_reach": 0.48, "cliff_clearance": 0.06})
    reloaded = load_params(params_to_dict(bundle))
    assert params_to_dict(reloaded) == params_to_dict(bundle)


def test_unknown_keys_are_rejected_by_name():
    with pytest.raises(ParamsError, match="unknown parameter keys: banana"):
        load_params({"banana": 1.0})


def test_malformed_documents():
    with pytest.raises(ParamsError, match="invalid JSON"):
        load_params("{not json")
    with pytest.raises(ParamsError, match="JSON object"):
        load_params("[1, 2]")
    with pytest.raises(ParamsError, match="max_forward must be a number"):
        load_params({"max_forward": "wide"})
    with pytest.raises(ParamsError, match="max_forward must be a number"):
        load_params({"max_forward": True})
    with pytest.raises(ParamsError, match="must be finite"):
        load_params({"w_distance": float("nan")})


def test_wiggle_weights_need_three_entries():
    with pytest.raises(ParamsError, match="3 diagonal entries"):
        load_params({"wiggle_weights": [1.0, 1.0]})
    with pytest.raises(ParamsError):
        load_params({"wiggle_weights": [1.0, 1.0, -0.5]})


def test_group_validation_becomes_params_error():
    with pytest.raises(ParamsError):
        load_params({"xy_resolution": 0.0})
    with pytest.raises(ParamsError):
        load_params({"inflation": 0.5})
    with pytest.raises(ParamsError, match="stance_clearance"):
        load_params({"stance_clearance": [[0, 0], [1, 0]]})


def test_inset_must_stay_below_the_lattice_resolution():
    with pytest.raises(ParamsError, match="below xy_resolution"):
        load_params({"xy_resolution": 0.01})
    with pytest.raises(ParamsError, match="below xy_resolution"):
        ParamsBundle(lattice=LatticeParams(xy_resolution=0.02))


def test_foot_sole_must_surround_the_ankle():
    with pytest.raises(ParamsError):
        load_params({"foot_sole": [[0.3, 0.1], [0.1, 0.1], [0.1, -0.1], [0.3, -0.1]]})
