import json
import os
import subprocess
import sys

import pytest

from derivedcells.cli import main

from builders import PROBLEMS


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def problem(name):
    return str(PROBLEMS / name)


def test_check_negativity_integers(capsys):
    code, out, _ = run(["check-negativity", "--input", problem("integers.json")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["negative"] is True


def test_check_negativity_Zp(capsys):
    code, out, _ = run(["check-negativity", "--input", problem("zp_squared.json")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["weakly_negative"] is True and doc["negative"] is False


def test_check_negativity_not_weakly_negative(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"objects": {"Z": {"group": ["0"]},
                                         "Z[-2]": {"group": ["0"], "degree": "2"}},
                             "generators": [["Z", "Z[-2]"]]}))
    code, out, _ = run(["check-negativity", "--input", str(f)], capsys)
    assert code == 2 and json.loads(out)["weakly_negative"] is False


def test_malformed_differential(capsys):
    code, _, err = run(["check-negativity", "--input", problem("bad_differential.json")], capsys)
    assert code == 3
    assert "degree" in err


def test_missing_input(capsys):
    assert run(["check-negativity"], capsys)[0] == 3
    assert run(["check-negativity", "--input", "/nonexistent.json"], capsys)[0] == 3


def test_ext_table(capsys):
    code, out, _ = run(["ext-table", "--input", problem("zp_squared.json"), "--range", "-1..2"],
                       capsys)
    rows = {(r["source"], r["target"]): r["values"] for r in json.loads(out)["rows"]}
    assert code == 0
    assert rows[("Z/2", "Z/2")] == {"-1": "0", "0": "Z/2", "1": "Z/2", "2": "0"}
    code, out, _ = run(["ext-table", "--input", problem("integers.json")], capsys)
    [row] = json.loads(out)["rows"]
    assert row["values"] == {"0": "Z", "1": "0"}
    code, out, _ = run(["ext-table", "--input", problem("kA2_simples.json")], capsys)
    rows = {(r["source"], r["target"]): r["values"] for r in json.loads(out)["rows"]}
    assert rows[("S1", "S2")]["1"] == "1"
    assert rows[("S2", "S1")].get("1", "0") == "0"


def test_ext_table_bad_range(capsys):
    assert run(["ext-table", "--input", problem("integers.json"), "--range", "x"], capsys)[0] == 3


def test_approximate_and_verify(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    code, _, _ = run(["approximate", "--input", problem("zp_squared.json"),
                      "--output", str(out_file)], capsys)
    doc = json.loads(out_file.read_text())
    assert code == 0 and doc["status"] == "SUCCESS" and doc["depth"] == "2"
    assert run(["verify", str(out_file)], capsys)[0] == 0
    assert run(["approximate", "--verify", str(out_file)], capsys)[0] == 0
    # tamper with a stored matrix entry
    text = out_file.read_text()
    doc["phi"] = json.loads(json.dumps(doc["phi"]).replace('"2"', '"3"', 1))
    out_file.write_text(json.dumps(doc))
    assert run(["verify", "--verify", str(out_file)], capsys)[0] == 4
    out_file.write_text(text)
    assert run(["verify", str(out_file)], capsys)[0] == 0


def test_approximate_partial(capsys):
    code, out, _ = run(["approximate", "--input", problem("zp_squared.json"), "--max-depth", "1"],
                       capsys)
    assert code == 2 and json.loads(out)["status"] == "PARTIAL"


def test_approximate_kA2(capsys):
    code, out, _ = run(["approximate", "--input", problem("kA2_simples.json")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["mode"] == "partitioned" and doc["depth"] == "2"


def test_approximate_hypothesis_failure(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"objects": {"Z/2": {"group": ["2"]}, "F": {"group": ["0"]}},
                             "generators": [["Z/2"]], "target": "F"}))
    assert run(["approximate", "--input", str(f)], capsys)[0] == 2


def test_counterexample(tmp_path, capsys):
    out_file = tmp_path / "c.json"
    code, _, _ = run(["counterexample", "--prime", "2", "--bound", "1",
                      "--output", str(out_file)], capsys)
    doc = json.loads(out_file.read_text())
    assert code == 0
    assert doc["obstruction"]["verdict"] == "CONTRADICTION" and doc["minimal_depth"] == "2"
    assert run(["verify", str(out_file)], capsys)[0] == 0
    assert run(["counterexample", "--prime", "4", "--bound", "1"], capsys)[0] == 3
    assert run(["counterexample"], capsys)[0] == 3


def test_rebracket_sampled_and_stored(tmp_path, capsys):
    first = tmp_path / "r.json"
    code, _, _ = run(["rebracket", "--seed", "3", "--prime", "3", "--output", str(first)], capsys)
    assert code == 0
    assert run(["verify", str(first)], capsys)[0] == 0
    second = tmp_path / "r2.json"
    code, _, _ = run(["rebracket", "--input", str(first), "--output", str(second)], capsys)
    doc = json.loads(second.read_text())
    assert code == 0 and doc["operation"] == "inverse_octahedral"
    assert run(["verify", str(second)], capsys)[0] == 0


def test_rebracket_needs_a_node(tmp_path, capsys):
    f = tmp_path / "leaf.json"
    from derivedcells import certificates as cert
    from derivedcells.modules import cyclic_group
    from derivedcells.serialize import dumps
    from derivedcells.towers import Leaf
    f.write_text(dumps(cert.tower_document(Leaf.single("Z/2", cyclic_group(2)))))
    assert run(["rebracket", "--input", str(f)], capsys)[0] == 3


def test_propagate(capsys):
    code, out, _ = run(["propagate", "--input", problem("propagation.json"), "--trials", "10"],
                       capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "PASSED" and doc["passed"] == "10"


def test_output_is_byte_stable(tmp_path):
    env = dict(os.environ)
    outs = []
    for hashseed in ("1", "2"):
        env["PYTHONHASHSEED"] = hashseed
        res = subprocess.run([sys.executable, "-m", "derivedcells.cli", "rebracket", "--seed", "4"],
                             capture_output=True, text=True, env=env, check=True)
        outs.append(res.stdout)
    assert outs[0] == outs[1]


def test_verify_needs_file(capsys):
    assert run(["verify"], capsys)[0] == 3


@pytest.mark.parametrize("bad", ["[]", '{"format": "x"}', "not json"])
def test_verify_malformed(tmp_path, capsys, bad):
    f = tmp_path / "x.json"
    f.write_text(bad)
    assert run(["verify", str(f)], capsys)[0] == 3
