import json
import subprocess
import sys

import pytest

from surface_flows.cli import main, verify_duality
from surface_flows import build_group
from surface_flows.io import load_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_faces_bouquet(capsys):
    code, out, _ = run(capsys, "faces", "examples/bouquet2.json")
    assert code == 0 and out.strip() == "faces: 1, genus: 1"


def test_faces_json(capsys):
    code, out, _ = run(capsys, "faces", "theta", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["genus"] == [0] and len(doc["maps"]["faces"]) == 3


def test_genus(capsys):
    assert run(capsys, "genus", "bouquet4")[1].strip() == "genus: 2"


def test_count_flows_nowhere_identity(capsys):
    code, out, _ = run(capsys, "count-flows", "examples/bouquet2.json", "--group", "symmetric:3",
                       "--nowhere-identity", "--method", "formula")
    assert code == 0 and out.strip() == "7"


def test_count_flows_methods(capsys):
    assert run(capsys, "count-flows", "theta", "--group", "cyclic:3")[1].strip() == "9"
    assert run(capsys, "count-flows", "theta", "--group", "cyclic:3", "--method", "brute")[1].strip() == "9"


def test_partition_loop(capsys):
    code, out, _ = run(capsys, "partition", "examples/loop.json", "--group", "cyclic:2",
                       "--class-function", "regular", "--method", "brute")
    assert code == 0 and out.strip() == "4"


def test_partition_class_functions(capsys):
    args = ["partition", "dumbbell", "--group", "symmetric:3"]
    assert run(capsys, *args, "--class-function", "indicator:1")[1].strip() == "432"
    assert run(capsys, *args, "--class-function", "irreducible:0")[1].strip() == "216"  # trivial: 6^3 terms of 1
    code, out, _ = run(capsys, *args, "--class-function", "values:[6, 0, 0]", "--json")
    assert json.loads(out) == {"value": 1296, "method": "closed", "terms": 3}
    code, out, _ = run(capsys, "partition", "bouquet2", "--group", "cyclic:3",
                       "--class-function", "values:[[0, 1], 1, 1]", "--json")
    assert code == 0 and isinstance(json.loads(out)["value"], list)


def test_frobenius(capsys):
    code, out, _ = run(capsys, "frobenius", "--group", "symmetric:3", "--genus", "1", "--class", "0")
    assert code == 0 and out.strip() == "18"
    code, out, _ = run(capsys, "frobenius", "--group", "symmetric:3", "--genus", "2", "--class", "2",
                       "--method", "brute", "--json")
    assert json.loads(out)["value"] == 810


def test_group_show(capsys):
    code, out, _ = run(capsys, "group", "show", "symmetric:3")
    assert code == 0 and "order 6" in out and "chi2 (dim 2)" in out
    code, out, _ = run(capsys, "group", "show", "quaternion", "--json")
    doc = json.loads(out)
    assert doc["order"] == 8 and len(doc["classes"]) == 5
    assert len(doc["characters"]) == 5 and all(len(row) == 5 for row in doc["characters"])
    assert doc["characters"][0][0] == [1.0, 0.0]


def test_dual_outputs(capsys):
    code, out, _ = run(capsys, "dual", "loop", "--json")
    doc = json.loads(out)
    assert len(doc["vertices"]) == 2 and len(doc["edges"]) == 1
    assert run(capsys, "dual", "theta", "--dot")[1].startswith("digraph")


def test_tension_and_cover(capsys, tmp_path):
    labels = tmp_path / "l.json"
    labels.write_text(json.dumps({"group": "cyclic:2", "a1": 1, "b1": 1}))
    code, out, _ = run(capsys, "tension", "check", "bouquet2", "--labels", str(labels), "--json")
    assert json.loads(out) == {"flow": True, "nowhere_identity": True,
                               "local_tension": True, "global_tension": False}
    code, out, _ = run(capsys, "cover", "bouquet2", "--labels", str(labels), "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["vertices"]) == 2 and len(doc["edges"]) == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": "symmetric:3", "a1": 1, "b1": 3}))
    code, _, err = run(capsys, "cover", "bouquet2", "--labels", str(bad))
    assert code == 1 and "not a local tension" in err


def test_duality_verify(capsys):
    code, out, _ = run(capsys, "duality", "verify", "k4", "--group", "symmetric:3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    assert any("360 vs 6 x 60" in line for line in lines)


def test_duality_verify_sampled(capsys):
    code, out, _ = run(capsys, "duality", "verify", "bouquet4", "--group", "dihedral:4",
                       "--budget", "1000", "--seed", "3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert any("sampled" in c["detail"] for c in doc["checks"])


def test_verify_function_reports_rows():
    rows = verify_duality(load_graph("theta"), build_group("cyclic:3"))
    assert all(ok for _, ok, _ in rows)


@pytest.mark.parametrize("argv", [
    ["faces", "no_such_graph.json"],
    ["partition", "loop"],
    ["partition", "loop", "--group", "bogus:1"],
    ["partition", "loop", "--group", "cyclic:2", "--class-function", "indicator:9"],
    ["partition", "k4", "--group", "symmetric:3", "--method", "brute", "--budget", "10"],
    ["frobenius", "--group", "cyclic:2"],
    ["tension", "check", "theta"],
])
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("argv", [[], ["bogus"], ["partition"], ["partition", "loop", "--method", "x"],
                                  ["frobenius", "--genus", "x"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_invalid_graph_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"vertices": ["u"], "edges": [{"id": "e", "tail": "u", "head": "u"}],
                             "rotations": {"u": [["e", "tail"]]}}))
    code, _, err = run(capsys, "faces", str(p))
    assert code == 1 and "rotation missing dart (e, head)" in err


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "surface_flows.cli", "genus", "bouquet2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "genus: 1"
