import json
import subprocess
import sys

import numpy as np
import pytest

from pmds_regen.arrays import ArrayCodeword
from pmds_regen.cli import element_width, main, parse_ints
from pmds_regen.registry import load_code


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pmds_files(tmp_path, capsys):
    desc = tmp_path / "code.json"
    word = tmp_path / "word.json"
    msg = tmp_path / "msg.bin"
    assert run(["build", "--construction", "pmds2", "--mu", 2, "--n", 4, "--r", 2, "--d", 3,
                "--out", desc], capsys)[0] == 0
    assert run(["encode", "--code", desc, "--seed", 3, "--save-message", msg, "--out", word], capsys)[0] == 0
    return desc, word, msg


def test_parse_ints():
    assert parse_ints("0,5-7,9") == [0, 5, 6, 7, 9]
    assert parse_ints("") == [] and parse_ints(None) == []


def test_no_arguments_is_usage_error(capsys):
    assert run([], capsys)[0] == 2


def test_unknown_flag(capsys):
    assert run(["build", "--bogus"], capsys)[0] == 2


def test_invalid_parameters(capsys):
    code, _, err = run(["build", "--mu", 1, "--n", 4, "--r", 2], capsys)
    assert code == 2 and "error" in err


def test_build_descriptor(pmds_files):
    desc, _, _ = pmds_files
    d = json.loads(desc.read_text())
    assert d["kind"] == "pmds2" and d["N"] == 16 and d["w"] == 6


def test_decode_round_trip(pmds_files, tmp_path, capsys):
    desc, word, msg = pmds_files
    out = tmp_path / "back.bin"
    code, _, _ = run(["decode", "--code", desc, "--word", word, "--erased", "0,1,5-6", "--out", out], capsys)
    assert code == 0
    assert out.read_bytes() == msg.read_bytes()


def test_decode_from_message_file(pmds_files, tmp_path, capsys):
    desc, word, msg = pmds_files
    again = tmp_path / "again.json"
    assert run(["encode", "--code", desc, "--message", msg, "--out", again], capsys)[0] == 0
    assert ArrayCodeword.from_json(again.read_text()) == ArrayCodeword.from_json(word.read_text())


def test_decode_unrecoverable(pmds_files, capsys):
    desc, word, _ = pmds_files
    code, _, err = run(["decode", "--code", desc, "--word", word, "--erased", "0-6"], capsys)
    assert code == 1 and "error" in err


def test_local_repair(pmds_files, capsys):
    desc, word, _ = pmds_files
    code, out, _ = run(["repair", "--code", desc, "--word", word, "--failed", 5], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["matches_input"] and rep["total"] == 24


def test_repair_with_explicit_helpers(pmds_files, capsys):
    desc, word, _ = pmds_files
    code, out, _ = run(["repair", "--code", desc, "--word", word, "--failed", 0, "--helpers", "1,2"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["matches_input"] and not rep["regenerating"]


def test_verify_pmds_and_sd(pmds_files, capsys):
    desc, _, _ = pmds_files
    code, out, _ = run(["verify", "--code", desc, "--pmds", "--sd", "--msr-local", "--budget", 0], capsys)
    res = json.loads(out)
    assert code == 0
    assert [r["property"] for r in res] == ["PMDS", "SD", "MSR-local"]
    assert all(r["result"] == "certificate" for r in res)


def test_verify_counterexample_exit_code(tmp_path, capsys):
    desc = tmp_path / "bad.json"
    h = [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1], [1, 1, 1, 1, 1, 1]]
    desc.write_text(json.dumps({"kind": "scalar", "field": {"p": 2, "m": 3, "modulus": None,
                                                            "subfield_degree": 3},
                                "H": h, "mu": 2, "n": 3, "r": 1, "s": 1}))
    code, out, _ = run(["verify", "--code", desc], capsys)
    assert code == 1 and json.loads(out)[0]["result"] == "counterexample"


def test_verify_global_on_local_code(pmds_files, capsys):
    desc, _, _ = pmds_files
    assert run(["verify", "--code", desc, "--msr-global"], capsys)[0] == 2


def test_global_build_and_repair(tmp_path, capsys):
    desc = tmp_path / "g.json"
    word = tmp_path / "gw.json"
    assert run(["build", "--construction", "global", "--mu", 2, "--n", 3, "--r", 1, "--s", 2,
                "--out", desc], capsys)[0] == 0
    c = load_code(str(desc))
    assert c.ell == 1764
    assert run(["encode", "--code", desc, "--out", word], capsys)[0] == 0
    code, out, _ = run(["repair", "--code", desc, "--word", word, "--failed", 2, "--pattern", "0;3"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["matches_input"] and rep["total"] == 2646
    code, out, _ = run(["verify", "--code", desc, "--msr-global"], capsys)
    assert code == 0


def test_universal_round_trip(tmp_path, capsys):
    desc = tmp_path / "u.json"
    word = tmp_path / "uw.json"
    assert run(["build", "--construction", "universal-gabrys", "--mu", 2, "--n", 3, "--r", 1, "--s", 1,
                "--out", desc], capsys)[0] == 0
    assert run(["encode", "--code", desc, "--out", word], capsys)[0] == 0
    code, out, _ = run(["repair", "--code", desc, "--word", word, "--failed", 4], capsys)
    assert code == 0 and json.loads(out)["matches_input"]
    assert run(["verify", "--code", desc, "--pmds", "--budget", 0], capsys)[0] == 0


def test_sizes_csv(capsys):
    code, out, _ = run(["sizes", "--n", 10, "--mu", 5, "--r", 1, "--s", 2, "--d", 9,
                        "--constructions", "A,B"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "n,mu,r,s,d,construction,q_lower,q_upper,ell"
    assert lines[1].startswith("10,5,1,2,9,A,86,170,")


def test_sizes_unknown_construction(capsys):
    assert run(["sizes", "--n", 4, "--mu", 2, "--constructions", "Q"], capsys)[0] == 2


def test_sizes_comparison(capsys):
    code, out, _ = run(["sizes", "--check-comparison", "--n", "3-6", "--mu", "2-4"], capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_simulate(pmds_files, tmp_path, capsys):
    desc, _, _ = pmds_files
    scen = tmp_path / "s.json"
    scen.write_text(json.dumps([{"event": "fail", "node": 1}, {"event": "repair"}]))
    code, out, _ = run(["simulate", "--code", desc, "--scenario", scen], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["recovered"] and rep["total_traffic"] == 24
    scen.write_text(json.dumps({"events": [{"event": "fail", "node": k} for k in range(7)]
                                + [{"event": "repair"}]}))
    assert run(["simulate", "--code", desc, "--scenario", scen], capsys)[0] == 1


def test_element_width():
    from pmds_regen.gf import GF
    assert element_width(GF(2, 8)) == 1
    assert element_width(GF(2, 9)) == 2
    assert element_width(GF(3, 6)) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pmds_regen", "sizes", "--n", "4", "--mu", "2",
                          "--r", "2", "--s", "2", "--d", "3", "--constructions", "B"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "4,2,2,2,3,B,4096,4096,16"
