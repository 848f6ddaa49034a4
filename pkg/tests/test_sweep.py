from __future__ import annotations

import hashlib
import json

import pytest

from btdslab.errors import ParseError
from btdslab.lab.config import SweepConfig
from btdslab.lab.sweep import EXHAUSTED, classify_all, read_atlas, run_enumerate, run_search

CFG2 = SweepConfig(min_points=1, max_points=2)


@pytest.fixture(scope="module")
def rows2():
    return classify_all(CFG2)


def test_one_point_row_all_true():
    (row,) = classify_all(SweepConfig(min_points=1, max_points=1))
    assert all(row["axioms"].values()) and all(row["classical"].values())
    for ctx in row["contexts"]:
        assert all(ctx["H"].values()) and all(ctx["PH"].values())


def test_two_point_sweep_has_sixteen_pairs(rows2):
    assert sum(r["n"] == 2 for r in rows2) == 16


def test_rows_are_keyed_and_sorted(rows2):
    keys = [r["key"] for r in rows2]
    assert keys == sorted(keys)
    r = rows2[0]
    canon = json.dumps({"n": r["n"], "tau1": r["min_nbhd"][0], "tau2": r["min_nbhd"][1]}, sort_keys=True, separators=(",", ":"))
    assert hashlib.sha256(canon.encode()).hexdigest() == r["key"]


def test_enumerate_writes_atlas(tmp_path, rows2):
    out = tmp_path / "atlas.jsonl"
    summary = run_enumerate(CFG2, out)
    assert summary["complete"] and summary["rows"] == 17 and summary["per_n"] == {"1": 1, "2": 16}
    assert read_atlas(out) == json.loads(json.dumps(rows2))
    assert not (tmp_path / "atlas.jsonl.partial").exists()


def test_resume_matches_single_run(tmp_path):
    single = tmp_path / "single.jsonl"
    run_enumerate(CFG2, single)
    out = tmp_path / "resumed.jsonl"
    first = run_enumerate(CFG2, out, stop_after=5)
    assert not first["complete"] and not out.exists()
    partial = tmp_path / "resumed.jsonl.partial"
    # simulate a torn write at the tail of the checkpoint
    with partial.open("a") as fh:
        fh.write('{"key": "trunc')
    second = run_enumerate(CFG2, out)
    assert second["complete"] and second["resumed_rows"] == 5
    assert out.read_bytes() == single.read_bytes()


def test_checkpoint_from_other_config_rejected(tmp_path):
    out = tmp_path / "a.jsonl"
    run_enumerate(CFG2, out, stop_after=2)
    with pytest.raises(ParseError):
        run_enumerate(SweepConfig(min_points=1, max_points=2, oracle_len=2), out)


def test_workers_do_not_change_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_enumerate(CFG2, a)
    run_enumerate(SweepConfig(min_points=1, max_points=2, workers=3), b)
    assert a.read_bytes() == b.read_bytes()


def test_iso_dedup_keeps_one_per_class():
    rows = classify_all(SweepConfig(min_points=2, max_points=2, iso_dedup=True))
    assert 1 < len(rows) < 16


def test_search_finds_ab_instance(rows2):
    res = run_search(SweepConfig(max_points=2, predicate="H_almost_Rothberger AND NOT H_Rothberger"), rows2)
    assert res["status"] == "found"
    assert all(f["oracle_reconfirmed"] for f in res["findings"])
    ab = [f for f in res["findings"] if f["min_nbhd"] == [[1, 2], [3, 3]] and f["context"] == "path:0->0"]
    assert ab


@pytest.mark.parametrize("pred", ["H_weak_Menger AND NOT H_almost_Menger", "H_Rothberger AND NOT H_Rothberger"])
def test_search_reports_exhaustion(rows2, pred):
    res = run_search(SweepConfig(max_points=2, predicate=pred), rows2)
    assert res["status"] == EXHAUSTED and res["findings"] == []
    assert res["bound"]["max_points"] == 2 and res["instances_checked"] > 0


def test_search_needs_predicate(rows2):
    with pytest.raises(ParseError):
        run_search(SweepConfig(max_points=2), rows2)
