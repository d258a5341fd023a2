import json

import pytest

from mgpir.cli import main, parse_config, symbol


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symbols():
    assert symbol(1, 1, 1) == "a₁"
    assert symbol(2, 2, 12) == "b′₁₂"
    assert symbol(3, 3, 4) == "c′′₄"


def test_table_from_file(capsys, tmp_path):
    f = tmp_path / "p3.txt"
    f.write_text("3 1\n1 2\n2 3\n")
    code, out, _ = run(capsys, "table", "--graph", str(f), "--identity-perms")
    assert code == 0
    assert out.splitlines()[1] == "θ=1: a₁ | a₂+b₂ | b₂"


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--graph", "path:3", "--r", "2", "--theta", "2,1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc[0]["theta"] == [2, 1]
    assert [len(s["bits"]) for s in doc[0]["per-server"]] == [3, 3, 3]


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--graph", "path:3", "--r", "2", "--theta", "1,1", "--seed", "7")
    assert code == 0
    assert "download D = 9" in out and "rate = 4/9" in out and "decoded: OK" in out
    code, out, _ = run(capsys, "simulate", "--graph", "path:5", "--r", "3", "--theta", "2,3", "--json")
    doc = json.loads(out)
    assert doc["verdict"] == "OK" and doc["rate"] == "8/35" and doc["download"] == 35


def test_output_is_deterministic(capsys, tmp_path):
    args = ["simulate", "--graph", "path:4", "--r", "2", "--theta", "3,2", "--seed", "11", "--json"]
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.json"
        assert main(args + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert capsys.readouterr().out == ""


def test_audit_exit_codes(capsys):
    code, out, _ = run(capsys, "audit", "--graph", "path:3", "--r", "2")
    assert code == 0 and out.count("PASS") == 4
    code, out, _ = run(capsys, "audit", "--graph", "path:3", "--r", "2", "--variant", "unflipped")
    assert code == 1 and "FAIL  privacy" in out
    code, out, _ = run(capsys, "audit", "--graph", "path:4", "--variant", "skewed", "--json")
    reports = json.loads(out)
    assert code == 1 and {r["property"]: r["verdict"] for r in reports}["srp"] == "FAIL"
    code, _, _ = run(capsys, "audit", "--graph", "path:3", "--variant", "corrupt", "--trials", "5")
    assert code == 1


def test_audit_budget_is_a_usage_error(capsys):
    code, _, err = run(capsys, "audit", "--graph", "path:4", "--r", "3", "--trials", "2")
    assert code == 2 and "sampled" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--graph", "path:4", "--r", "2", "--json")
    assert code == 0
    assert json.loads(out) == {"graph": "P4", "r": 2, "lower": "1/3", "upper_closed": "1/3",
                               "upper_lp": "1/3", "lp_optimum": "3/1", "tight": True}
    code, out, _ = run(capsys, "bounds", "--graph", "cycle:4", "--base-rate", "2/5")
    assert code == 0 and "lower bound        2/5 (0.4000)" in out and "tight              no" in out
    code, out, _ = run(capsys, "bounds", "--graph", "star:3", "--json")
    assert json.loads(out)["lower"] is None


@pytest.mark.parametrize("argv,needle", [
    (["table", "--graph", "nowhere.txt"], "not found"),
    (["table", "--graph", "cycle:4"], "path graphs"),
    (["simulate", "--graph", "path:3"], "--theta"),
    (["simulate", "--graph", "path:3", "--r", "2", "--theta", "1"], "EDGE,COPY"),
    (["simulate", "--graph", "path:3", "--theta", "1,1"], "bare EDGE"),
    (["simulate", "--graph", "path:3", "--theta", "x"], "bad --theta"),
    (["simulate", "--graph", "path:3", "--theta", "3"], "not a file"),
    (["bounds", "--graph", "path:3", "--r", "0"], "at least 1"),
    (["bounds", "--graph", "path:3", "--base-rate", "half"], "bad --base-rate"),
    (["bounds", "--graph", "wheel:3"], "family"),
])
def test_usage_errors(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and needle in err and out == ""


def test_parse_error_reports_line(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("3 1\n1 2\n2 2\n")
    code, _, err = run(capsys, "bounds", "--graph", str(f))
    assert code == 2 and "line 3:" in err


def test_argparse_rejects_unknown_mode():
    with pytest.raises(SystemExit):
        parse_config(["audit", "--graph", "path:3", "--mode", "fast"])
