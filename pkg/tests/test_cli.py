import json

import pytest

from l0calc.cli import main

COPOINTS3 = {
    "atoms": ["0", "1", "2"],
    "family": [["1", "2"], ["0", "2"], ["0", "1"]],
    "kind": "cover",
    "unit_cost": "1",
}
MIN2 = {"atoms": ["a", "b", "c"], "kind": "table",
        "values": {str(m): str(min(bin(m).count("1"), 2)) for m in range(8)}}
MEASURE = {"atoms": ["a", "b"], "kind": "measure", "weights": {"a": "1/3", "b": "2/3"}}


def write(dirpath, name, obj):
    p = dirpath / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


def structured(capsys, *argv):
    code = main([*map(str, argv), "--output", "structured"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_analyze_copoints(tmp_path, capsys):
    p = write(tmp_path, "c3.json", COPOINTS3)
    code, res = structured(capsys, "analyze", p)
    assert code == 0
    rep = res["report"]
    assert rep["monotone"] and rep["subadditive"] and rep["strictly_positive"]
    assert not rep["submodular"] and not rep["additive"]
    assert rep["verdict"] == "submeasure"
    assert res["kappa_preview"] == "3/4" and res["subcommand"] == "analyze"
    assert len(res["input_sha256"]) == 64


def test_analyze_measure_text(tmp_path, capsys):
    p = write(tmp_path, "m.json", MEASURE)
    assert main(["analyze", str(p)]) == 0
    out = capsys.readouterr().out
    assert "verdict: measure" in out and "kappa_preview: 1" in out


def test_generate_copoints_matches_canonical(capsys):
    assert main(["generate", "copoints", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == COPOINTS3


@pytest.mark.parametrize("sub,extra", [("kappa", []), ("kelley", []), ("christensen", ["--epsilon", "1/2"])])
def test_certificate_round_trip(tmp_path, capsys, sub, extra):
    rec = MIN2 if sub == "kelley" else COPOINTS3
    p = write(tmp_path, "in.json", rec)
    code, cert = structured(capsys, sub, p, *extra)
    assert code == 0 and cert["verified"] is True
    c = write(tmp_path, "cert.json", cert)
    code, res = structured(capsys, sub, c, "--verify")
    assert code == 0 and res["verified"] is True


def test_kelley_order_flag(tmp_path, capsys):
    p = write(tmp_path, "min2.json", MIN2)
    code, res = structured(capsys, "kelley", p, "--order", "a,b,c")
    assert code == 0 and res["nu"] == {"a": "1", "b": "1", "c": "0"}


def test_tampered_certificate_exit_5(tmp_path, capsys):
    p = write(tmp_path, "in.json", COPOINTS3)
    _, cert = structured(capsys, "kappa", p)
    cert["M"] = "2"
    c = write(tmp_path, "cert.json", cert)
    assert main(["kappa", str(c), "--verify"]) == 5
    assert "verification failed" in capsys.readouterr().err


def test_precondition_exit_3(tmp_path, capsys):
    p = write(tmp_path, "c3.json", COPOINTS3)
    assert main(["kelley", str(p)]) == 3
    assert "witness" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["analyze"],
    ["kappa", "{c3}", "--max-n", "13"],
    ["christensen", "{c3}"],
    ["generate", "random_cover", "4", "6", "1/2"],
    ["generate", "nosuchkind", "3"],
    ["selftest", "--level", "2"],
    ["analyze", "{c3}", "--seed", "-1"],
])
def test_input_errors_exit_2(tmp_path, capsys, argv):
    p = write(tmp_path, "c3.json", COPOINTS3)
    argv = [a.format(c3=p) for a in argv]
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects the flag itself
        code = exc.code
    assert code == 2
    assert capsys.readouterr().err


def test_malformed_json_names_location(tmp_path, capsys):
    p = write(tmp_path, "bad.json", '{"atoms": [\n')
    assert main(["analyze", str(p)]) == 2
    err = capsys.readouterr().err
    assert "bad.json" in err and "line 2" in err


def test_invalid_set_function_exit_2(tmp_path, capsys):
    rec = {"atoms": ["a"], "kind": "table", "values": {"0": "1", "1": "1"}}
    p = write(tmp_path, "bad.json", rec)
    assert main(["analyze", str(p)]) == 2


def test_group_script_exit_codes(tmp_path, capsys):
    ok = write(tmp_path, "ok.l0", "atoms p q\ngroup cyclic 2\nphi cardinality 1/2\n"
               "a = pu {1:[p], 0:[q]}\nassert dphi(a, id) == 1/2\n")
    code, res = structured(capsys, "group", ok)
    assert code == 0 and res["asserts"] == "1"
    bad = write(tmp_path, "bad.l0", "atoms p q\ngroup cyclic 2\nphi cardinality 1/2\n"
                "a = pu {1:[p], 0:[q]}\nassert dphi(a, id) == 1\n")
    assert main(["group", str(bad)]) == 4
    err = capsys.readouterr().err
    assert "left:  1/2" in err


def test_lift(tmp_path, capsys):
    rec = {"atoms": ["p", "q"], "group": {"kind": "cyclic", "order": 2},
           "labels": {"1": ["p"], "0": ["q"]}, "f": {"0": "1", "1": "-1"},
           "measure": {"p": "1/2", "q": "1/2"}}
    p = write(tmp_path, "lift.json", rec)
    code, res = structured(capsys, "lift", p)
    assert code == 0 and res["value"] == "0" and res["f_identity"] == "1"


def test_selftest_text(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1].endswith("suites, 0 failed")
    assert all(line.startswith("PASS") for line in out[:-1])


def test_subprocess_determinism(cli_run):
    a = cli_run("generate", "random_cover", "4", "6", "1/2", "--seed", "7")
    b = cli_run("generate", "random_cover", "4", "6", "1/2", "--seed", "7")
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.endswith(b"\n")
    c = cli_run("kappa", "-", "--output", "structured", input_bytes=a.stdout)
    d = cli_run("kappa", "--input", "-", "--output", "structured", input_bytes=a.stdout)
    assert c.returncode == 0 and c.stdout == d.stdout
    assert b"wall time" in c.stderr and b"wall time" not in c.stdout
