from __future__ import annotations

import copy

import pytest
import yaml

from btdslab.fintop import members
from btdslab.homotopy import standard_interval
from btdslab.lab import reverify as rv
from btdslab.lab.check import check_instance
from btdslab.lab.paper import _data, load_fixture

FIXTURE = yaml.safe_load(_data("example_3_1.yaml"))


def test_close_family_adds_unions_and_intersections():
    fam = rv.close_family("abc", [["a", "b"], ["b", "c"]])
    assert fam == {frozenset(), frozenset("b"), frozenset("ab"), frozenset("bc"), frozenset("abc")}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_interval_family_matches_kernel_model(k):
    T = standard_interval(k)
    kernel = {frozenset(members(u)) for u in T.space.t1.opens}
    assert rv.interval_family(k) == kernel


def test_interval_family_k1():
    assert rv.interval_family(1) == {frozenset(), frozenset({1}), frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 1, 2})}


def test_family_from_nbhds_sierpinski():
    assert rv.family_from_nbhds(2, [1, 3]) == {frozenset(), frozenset({0}), frozenset({0, 1})}


def test_product_is_open_by_rectangles():
    sier = rv.family_from_nbhds(2, [1, 3])
    tfam = rv.interval_family(1)
    assert rv.product_is_open(frozenset({(0, 1)}), sier, tfam)
    assert not rv.product_is_open(frozenset({(1, 1)}), sier, tfam)
    assert not rv.product_is_open(frozenset({(0, 0)}), sier, tfam)


def test_continuous_reports_smallest_bad_open():
    sier = rv.family_from_nbhds(2, [1, 3])
    ok, bad = rv.continuous({0: 1, 1: 0}, sier, sier)
    assert not ok and bad == frozenset({0})
    assert rv.continuous({0: 0, 1: 1}, sier, sier) == (True, None)


def test_iteration_pins_conflict_along_orbit():
    # constant f sends both points to 0, so H(0, e0) is pinned by start(1) and start(0)
    assert rv.pins_iteration(1, [0, 0], [0, 1], [0, 1], 1) is None
    assert rv.pins_iteration(1, [0, 0], [1, 1], [0, 0], 1) == {(0, 0): 1, (0, 2): 0}


def test_path_pins_hold_endpoint_rows():
    pins = rv.pins_path(3, 1, [0, 1, 2], [0, 1, 2], 0, 2)
    assert all(pins[(0, t)] == 0 and pins[(2, t)] == 2 for t in range(3))
    assert pins[(1, 0)] == pins[(1, 2)] == 1


def test_exists_table_constant_homotopy_and_conflict():
    S = rv.SmallSystem.from_nbhds(2, [[1, 3], [1, 3]])
    assert rv.exists_table(S, S, 1, rv.pins_btds(2, 1, [0, 1], [0, 1]))
    assert not rv.exists_table(S, S, 1, None)


def test_ph_reflexivity_finding_is_confirmed():
    out = rv.reverify_ph({"reflexivity": {"first": {"f": [0, 0, 0]}}})
    assert out[0][:2] == ("reflexivity", rv.CONFIRMED)


def test_ph_reflexivity_false_witness_fails():
    # the identity has the constant-in-time path homotopy to itself
    out = rv.reverify_ph({"reflexivity": {"first": {"f": [0, 1, 2]}}})
    assert out[0][1] == rv.FAILED


def test_h_search_witness_with_existing_homotopy_fails():
    case = {"X": [[1, 3], [1, 3]], "Y": [[1, 3], [1, 3]], "f": [0, 1], "g": [0, 1], "F": [0, 1], "failed": "search"}
    status, why = rv.reverify_h_search({"transitivity": case})
    assert status == rv.FAILED and "k=1" in why


def test_composition_case_tampered_is_failed():
    ok = {"X": [[1, 3], [1, 3]], "Y": [[1, 3], [1, 3]], "f": [0, 1], "g": [0, 1], "F": [0, 1], "failed": "F o f"}
    assert rv.reverify_composition_case(ok)[0] == rv.FAILED
    bad = dict(ok, F=[1, 0])
    assert rv.reverify_composition_case(bad)[0] == rv.CONFIRMED


@pytest.fixture(scope="module")
def fixture_report():
    return check_instance(load_fixture("example_3_1.yaml"))


def test_fixture_disagreements_confirmed(fixture_report):
    out = rv.reverify_report(fixture_report)
    assert out["ok"] and out["summary"]["confirmed"] == 4


def test_tampered_continuity_witness_fails(fixture_report):
    rep = copy.deepcopy(fixture_report)
    g = next(c for c in rep["claims"] if c["id"] == "g-psi1-continuous")
    g["witness"]["open"] = ["1/2"]
    status, _ = rv.reverify_claim(FIXTURE, g)
    assert status == rv.FAILED
    assert not rv.reverify_report(rep)["ok"]


def test_tampered_composition_fails(fixture_report):
    rep = copy.deepcopy(fixture_report)
    comp = next(c for c in rep["claims"] if FIXTURE_CHECK[c["id"]] == "composition")
    comp["verdict"] = dict(comp["verdict"], **{"1": "1/4"})
    assert rv.reverify_claim(FIXTURE, comp)[0] == rv.FAILED


FIXTURE_CHECK = {c["id"]: c["check"] for c in FIXTURE["claims"]}


def test_unknown_claim_and_unrecognised_report():
    assert rv.reverify_claim(FIXTURE, {"id": "nope"})[0] == rv.FAILED
    with pytest.raises(ValueError):
        rv.reverify_report({})
