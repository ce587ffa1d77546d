import json

import pytest

from contact_type import __version__
from contact_type.cli import SCHEMA, main, shipped_corpus
from contact_type.typevalue import value_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_colength_json_report(capsys):
    code, rep = run_json(capsys, "colength", "z1^3", "z2^3", "-n", "2")
    assert code == 0
    assert rep["schema"] == SCHEMA and rep["version"] == __version__
    assert rep["command"] == "colength"
    assert rep["config"]["seed"] == 1
    assert value_from_json(rep["result"]["colength"]) == 9


def test_delta1_and_dn(capsys):
    code, rep = run_json(capsys, "delta1", "z1^3", "z2^3", "-n", "2")
    assert code == 0 and value_from_json(rep["result"]["Delta_1"]["value"]) == 3
    code, rep = run_json(capsys, "dn", "z1^2", "z2^2", "z3^2", "-n", "3")
    assert code == 0 and value_from_json(rep["result"]["D_3"]["value"]) == 2


def test_deltaq_and_dq_with_varieties(capsys):
    gens = ["z1^3+z2^3-z3^3", "(z1-z3)^4"]
    code, rep = run_json(capsys, "deltaq", *gens, "-n", "3", "-q", "2", "--implicit", "z1^3+z2^3-z3^3@2")
    d2 = rep["result"]["Delta_2"]
    assert code == 0 and (value_from_json(d2["value"]), d2["certificate"]) == (4, "exact")
    code, rep = run_json(capsys, "dq", "z1^3", "z2^3", "z3", "-n", "3", "-q", "2", "--variety", "s;u;0")
    assert code == 0 and value_from_json(rep["result"]["D_2"]["value"]) == 3


def test_hypersurface_from_case_file(capsys, tmp_path):
    src = shipped_corpus() / "hypersurface_z1cube_z2cube.json"
    code, rep = run_json(capsys, "deltaq", str(src), "-q", "1")
    assert code == 0 and value_from_json(rep["result"]["Delta_1"]["value"]) == 6


def test_seed_flag_and_environment(capsys, monkeypatch):
    code, rep = run_json(capsys, "colength", "z1", "z2^2", "-n", "2", "--seed", "9")
    assert rep["config"]["seed"] == 9
    monkeypatch.setenv("CONTACT_TYPE_SEED", "42")
    code, rep = run_json(capsys, "colength", "z1", "z2^2", "-n", "2", "--seed", "9")
    assert rep["config"]["seed"] == 42


def test_parse_errors_exit_2(capsys):
    assert run(capsys, "colength", "z1^^2", "-n", "2")[0] == 2
    assert run(capsys, "colength", "z3", "-n", "2")[0] == 2
    assert run(capsys, "colength", "z1")[0] == 2
    assert run(capsys, "deltaq", "z1*zb1", "-n", "1", "-q", "1", "--germ")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "colength", "z1^7+z2^5+z3^4", "z1*z2*z3", "z2^3-z3^2", "-n", "3", "--budget-steps", "2")
    assert code == 3 and "budget" in err


def test_unsupported_exit_4(capsys):
    code, _, err = run(capsys, "dq", "z1^2", "z2^2", "z3^2", "z4^2", "-n", "4", "-q", "2", "--implicit", "z1;z2@2")
    assert code == 4 and "unsupported" in err


def test_decompose_and_qpos(capsys):
    germ = "z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3"
    code, rep = run_json(capsys, "decompose", germ, "-n", "3")
    assert code == 0
    assert rep["result"]["decomposition"]["h"] == "z3"
    assert rep["result"]["f"] == ["z1^3", "z2^3"] and rep["result"]["reconstruction"] == "ok"
    code, rep = run_json(capsys, "qpos", germ, "-n", "3", "-q", "2",
                         "--curve", "t;0;0", "--curve", "0;t;0", "--form", "z3")
    assert code == 0
    assert rep["result"]["verdict"] == "no violation found"
    code, rep = run_json(capsys, "decompose", "(1/2)*z2 + (1/2)*zb2 + z1^2*zb1 + z1*zb1^2", "-n", "2")
    assert code == 0 and rep["result"]["rescale_hint"] == 2


def test_verify_shipped_corpus(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL 0" in out


def test_verify_is_byte_identical(capsys):
    first = run(capsys, "verify", "--json")[1]
    second = run(capsys, "verify", "--json")[1]
    assert first == second


def test_verify_empty_directory(capsys, tmp_path):
    code, rep = run_json(capsys, "verify", str(tmp_path))
    assert code == 0
    assert rep["result"]["summary"] == {"FAIL": 0, "INCONCLUSIVE": 0, "PASS": 0, "SKIPPED": 0}


def test_verify_corrupted_expectation_fails(capsys, tmp_path):
    case = json.loads((shipped_corpus() / "z1cube_z2cube_n2.json").read_text())
    key = next(iter(case["expected"]))
    case["expected"][key]["value"] = 7
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(case))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 5
    assert "FAIL" in out and "diagnostics:" in out


def test_verify_rejects_bad_case(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "x", "n": 2, "generators": ["z1"], "expected": {"Delta_1": {"value": 1}}}))
    assert run(capsys, "verify", str(path))[0] == 2
