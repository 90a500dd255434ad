import json

import pytest

from app.main import dispatch, main

C2 = "n=2; gens=(1 2)"


@pytest.fixture
def etale_file(tmp_path):
    path = tmp_path / "e2.json"
    result = dispatch(["construct", "--kind", "etale", "--field", "5", "--n", "2", "--out", str(path)])
    assert result.exit_code == 0
    return path


def test_realize_c2(tmp_path):
    out = tmp_path / "a.json"
    result = dispatch(["realize", "--group", C2, "--field", "7", "--out", str(out), "--json"])
    assert result.exit_code == 0
    doc = result.payload
    assert doc["dim"] == 15
    assert doc["aut_order"] == 2
    assert doc["simple"] is True
    assert doc["data"]["lambda"] == ["1", "2"]
    claims = json.loads(out.read_text())["meta"]["claims"]
    assert claims["automorphisms"] == {"order": 2, "matched": True}


def test_realize_over_a_field_too_small():
    result = dispatch(["realize", "--group", C2, "--field", "3"])
    assert result.exit_code == 2
    assert result.payload["error"] == "field_too_small"
    assert "mu" in result.payload["message"]


def test_bad_field_is_a_usage_error():
    result = dispatch(["realize", "--group", C2, "--field", "6"])
    assert result.exit_code == 2
    assert result.payload["error"] == "non_prime_characteristic"


def test_missing_subcommand():
    assert dispatch([]).exit_code == 2


@pytest.mark.parametrize("group", ["n=3; gens=(1 2 banana", "n=3; gens=xyz"])
def test_realize_rejects_a_malformed_group(group):
    result = dispatch(["realize", "--group", group, "--field", "7"])
    assert result.exit_code == 2
    assert result.payload["error"] == "invalid_permutation"


def test_simplicity_violation_has_a_witness(etale_file):
    result = dispatch(["simplicity", "--algebra", str(etale_file), "--mode", "exhaustive", "--json"])
    assert result.exit_code == 1
    check = result.payload["checks"][0]
    assert check["status"] == "fail"
    assert check["witness"]["witness"]["ideal_basis"] == [["1", "0"]]


def test_construct_then_verify(tmp_path):
    path = tmp_path / "w.json"
    built = dispatch(["construct", "--kind", "wrap", "--field", "5", "--out", str(path), "--full"])
    assert built.exit_code == 0
    assert built.payload["aut_order"] == 1
    verified = dispatch(["verify", "--algebra", str(path)])
    assert verified.exit_code == 0
    assert set(verified.payload["data"]["claims"]) == {"automorphisms", "eigenblocks", "simple",
                                                      "unique_left_identity"}


def test_verify_catches_a_wrong_order(tmp_path):
    path = tmp_path / "w.json"
    dispatch(["construct", "--kind", "wrap", "--field", "5", "--out", str(path), "--full"])
    doc = json.loads(path.read_text())
    doc["meta"]["claims"]["automorphisms"]["order"] = 7
    path.write_text(json.dumps(doc))
    result = dispatch(["verify", "--algebra", str(path)])
    assert result.exit_code == 1


def test_autgroup_of_b(tmp_path):
    path = tmp_path / "b.json"
    dispatch(["construct", "--kind", "B", "--field", "5", "--n", "2", "--out", str(path)])
    result = dispatch(["autgroup", "--algebra", str(path)])
    assert result.exit_code == 0
    assert result.payload["aut_order"] == 120
    assert result.payload["data"]["rejected"] == 360
    assert result.payload["data"]["violating_pairs"] == ["(u1^u2, u1^u2)"]


def test_autgroup_without_blocks_is_inconclusive(etale_file):
    doc = json.loads(etale_file.read_text())
    doc["blocks"] = []
    etale_file.write_text(json.dumps(doc))
    result = dispatch(["autgroup", "--algebra", str(etale_file), "--rounds", "20"])
    assert result.exit_code == 3


def test_normalizer_text():
    result = dispatch(["normalizer", "--group", C2, "--field", "7", "--lambda", "1,2"])
    assert result.exit_code == 0
    assert result.payload["data"]["f"] == "2*e1^2 + 5*e1*e2 + 2*e2^2"
    assert result.payload["data"]["lambda_route"] == "ratios"


def test_tensor_export(tmp_path):
    path = tmp_path / "r.json"
    dispatch(["construct", "--kind", "rigid", "--field", "5", "--out", str(path)])
    result = dispatch(["export-tensor", "--algebra", str(path)])
    assert result.payload["data"]["entries"] == [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "2"], [1, 1, 1, "1"]]
    forms = dispatch(["trace-forms", "--algebra", str(path)]).payload["data"]["forms"]
    assert set(forms) == {"LL", "RR", "LR", "RL"}


def test_report_file_is_canonical(tmp_path):
    report = tmp_path / "report.json"
    dispatch(["normalizer", "--group", C2, "--field", "7", "--report", str(report)])
    text = report.read_text()
    assert text.endswith("\n")
    assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":")) + "\n"


def test_main_prints_json(capsys):
    code = main(["normalizer", "--group", C2, "--field", "7", "--json"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["command"] == "normalizer"
