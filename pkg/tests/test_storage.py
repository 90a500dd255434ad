import json

import pytest

from app.core.errors import SchemaViolation
from app.core.exactfield import extension_field
from app.services.constructions import algebra_C, rigid_algebra, split_etale, wrap_simple
from app.services.storage import deserialize, read_algebra, serialize, write_algebra


def test_round_trip_keeps_everything(f5):
    c = algebra_C(rigid_algebra(2, f5), 2)
    again = deserialize(serialize(c))
    assert again == c
    assert serialize(again) == serialize(c)


def test_round_trip_over_an_extension(f49):
    w = wrap_simple(split_etale(2, f49))
    assert deserialize(serialize(w)) == w


def test_serialization_is_canonical(wrapped_rigid_f5):
    text = serialize(wrapped_rigid_f5)
    assert text.endswith("\n")
    assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":")) + "\n"


def test_claims_travel_with_the_file(tmp_path, wrapped_rigid_f5):
    path = tmp_path / "w.json"
    write_algebra(path, wrapped_rigid_f5, {"simple": {"mode": "exhaustive", "seed": 0}})
    a, claims = read_algebra(path)
    assert a == wrapped_rigid_f5
    assert claims == {"simple": {"mode": "exhaustive", "seed": 0}}


def _doc(**over):
    doc = {"field": {"characteristic": 5}, "dim": 2, "basis": ["a", "b"], "structure": [[0, 0, 0, "1"]]}
    doc.update(over)
    return json.dumps(doc)


def test_target_index_out_of_range():
    with pytest.raises(SchemaViolation) as err:
        deserialize(_doc(structure=[[0, 0, 2, "1"]]))
    assert err.value.location == "structure[0]"


@pytest.mark.parametrize("text", [
    "{not json",
    _doc(colour="red"),
    _doc(structure=[[0, 1, 0, "1"], [0, 0, 0, "1"]]),
    _doc(structure=[[0, 0, 0, "0"]]),
    _doc(basis=["a"]),
    _doc(blocks=[{"name": "x", "range": [0, 1], "role": "pairing-linked"}]),
    _doc(blocks=[{"name": "x", "range": [1, 1]}]),
    _doc(field={"characteristic": 6}),
])
def test_schema_violations(text):
    with pytest.raises(SchemaViolation):
        deserialize(text)


def test_missing_file(tmp_path):
    with pytest.raises(SchemaViolation):
        read_algebra(tmp_path / "absent.json")


def test_extension_values_use_coefficient_lists():
    f = extension_field(7, 2, [1, 0, 1])
    w = split_etale(2, f)
    assert json.loads(serialize(w))["structure"][0][3] == "[1,0]"
