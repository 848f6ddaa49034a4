from __future__ import annotations

import json
import subprocess
import sys

import pytest
import yaml

from btdslab.errors import OracleDisagreement
from btdslab.lab import cli
from btdslab.lab.config import CONFIG_ENV
from btdslab.lab.paper import _data

FIXTURE = yaml.safe_load(_data("example_3_1.yaml"))


@pytest.fixture
def fixture_file(tmp_path):
    p = tmp_path / "ex.yaml"
    p.write_text(yaml.safe_dump(FIXTURE))
    return p


def test_check_writes_report(fixture_file, tmp_path):
    out = tmp_path / "report.json"
    assert cli.main(["check", str(fixture_file), "--strict-topology", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    g = next(c for c in rep["claims"] if c["id"] == "g-psi1-continuous")
    assert g["verdict"] is False and g["witness"]["open"] == ["1"]


def test_check_empty_claims(tmp_path, capsys):
    p = tmp_path / "empty.yaml"
    p.write_text(yaml.safe_dump({"spaces": {}, "claims": []}))
    assert cli.main(["check", str(p)]) == 0
    assert json.loads(capsys.readouterr().out)["claims"] == []


def test_check_malformed_strict_exit_2(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text(yaml.safe_dump({"spaces": {"S": {"points": ["a", "b", "c"], "tau1": [["a"], ["b"]], "tau2": "discrete"}}}))
    assert cli.main(["check", str(p), "--strict-topology"]) == 2
    assert cli.main(["check", str(p)]) == 0
    assert cli.main(["check", str(tmp_path / "missing.yaml")]) == 2


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["search", "--anchor-reading", "sideways", "--predicate", "H_Menger"])
    assert exc.value.code == 2
    assert cli.main(["search", "--predicate", "H_Nope"]) == 2
    assert cli.main(["search"]) == 2
    assert cli.main(["enumerate", "--max-points", "9"]) == 2


def test_search_and_reverify(tmp_path):
    out = tmp_path / "found.json"
    args = ["search", "--max-points", "2", "--predicate", "H_almost_Rothberger AND NOT H_Rothberger", "--out", str(out)]
    assert cli.main(args) == 0
    res = json.loads(out.read_text())
    assert res["status"] == "found"
    assert cli.main(["reverify-witness", str(out), "--out", str(tmp_path / "rv.json")]) == 0
    assert json.loads((tmp_path / "rv.json").read_text())["summary"]["failed"] == 0


def test_reverify_detects_tampering(fixture_file, tmp_path):
    rep_path = tmp_path / "report.json"
    cli.main(["check", str(fixture_file), "--out", str(rep_path)])
    assert cli.main(["reverify-witness", str(rep_path), "--out", str(tmp_path / "ok.json")]) == 0
    rep = json.loads(rep_path.read_text())
    g = next(c for c in rep["claims"] if c["id"] == "g-psi1-continuous")
    g["witness"]["open"] = ["1", "1/2"]
    rep_path.write_text(json.dumps(rep))
    assert cli.main(["reverify-witness", str(rep_path), "--out", str(tmp_path / "bad.json")]) == 1
    (tmp_path / "junk.json").write_text("{}")
    assert cli.main(["reverify-witness", str(tmp_path / "junk.json")]) == 2


def test_enumerate_with_env_config(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(f"max_points: 1\nout: {tmp_path / 'atlas.jsonl'}\n")
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    assert cli.main(["enumerate"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["rows"] == 1 and (tmp_path / "atlas.jsonl").exists()


def test_internal_violation_exit_1(monkeypatch, tmp_path):
    def boom(*a, **k):
        raise OracleDisagreement("split")

    monkeypatch.setattr("btdslab.lab.sweep.run_enumerate", boom)
    assert cli.main(["enumerate", "--max-points", "1", "--out", str(tmp_path / "a.jsonl")]) == 1


def test_console_script_runs(tmp_path):
    out = tmp_path / "a.jsonl"
    proc = subprocess.run(
        [sys.executable, "-m", "btdslab.lab.cli", "enumerate", "--max-points", "2", "--out", str(out), "--workers", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["rows"] == 17
