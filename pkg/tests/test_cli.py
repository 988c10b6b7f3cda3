import json

import pytest

from detpsi import cli


def run(*argv):
    return cli.main(list(argv))


def verdict_section(path):
    with open(path) as fh:
        obj = json.load(fh)
    return json.dumps(obj["checks"], sort_keys=True)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        run("run", "--bogus")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run()
    assert exc.value.code == 2


def test_appendix_command(tmp_path):
    out = tmp_path / "out.json"
    assert run("appendix", "--q", "3", "--d", "2", "--seed", "7", "--count", "25", "-o", str(out)) == 0
    obj = json.loads(out.read_text())
    assert obj["schema"] == "detpsi-report/1"
    for part in ("A.1", "A.2", "A.3", "A.4"):
        got = [c for c in obj["checks"] if c["check"].startswith(part + "[") and "fixed" not in c["check"]
               and "multiplicativity" not in c["check"]]
        assert len(got) == 25 and all(c["verdict"] == "pass" for c in got)


def test_gen_scenario_then_main_seq(tmp_path):
    s = tmp_path / "s.json"
    out = tmp_path / "r.json"
    assert run("gen-scenario", "--seed", "1", "--d", "1", "-o", str(s)) == 0
    assert run("main-seq", "--scenario", str(s), "--prime", "x", "-o", str(out)) == 0
    obj = json.loads(out.read_text())
    assert any("local-exact[0]" in c["check"] and c["verdict"] == "pass" for c in obj["checks"])


def test_unreadable_scenario(tmp_path, capsys):
    assert run("main-seq", "--scenario", str(tmp_path / "missing.json")) == 2
    assert "error" in capsys.readouterr().err


def test_l1_on_wrong_l_is_invalid(tmp_path):
    out = tmp_path / "r.json"
    assert run("l1-seq", "--seed", "1", "--d", "1", "--degs", "1,2", "-o", str(out)) == 1
    obj = json.loads(out.read_text())
    assert obj["checks"][0]["verdict"] == "invalid-input"


def test_show(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run("psi-suite", "--seed", "3", "--count", "2", "-o", str(out)) == 0
    capsys.readouterr()
    assert run("show", str(out)) == 0
    text = capsys.readouterr().out
    obj = json.loads(out.read_text())
    for c in obj["checks"]:
        assert f"{c['check']}\t{c['verdict']}" in text
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run("show", str(bad)) == 2


def test_jobs_env_and_determinism(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("main-seq", "--seed", "1", "--count", "2", "--d", "1", "-o", str(a)) == 0
    monkeypatch.setenv("DETPSI_JOBS", "2")
    assert run("main-seq", "--seed", "1", "--count", "2", "--d", "1", "-o", str(b)) == 0
    assert verdict_section(a) == verdict_section(b)


def test_stdout_output(capsys):
    assert run("psi-suite", "--seed", "1", "--count", "1") == 0
    assert json.loads(capsys.readouterr().out)["suite"] == "psi-suite"
