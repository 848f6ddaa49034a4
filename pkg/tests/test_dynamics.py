from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdslab.bitop import BitopSpace, enumerate_spaces
from btdslab.dynamics import (
    Btds,
    PointMap,
    all_maps,
    compose,
    is_continuous,
    is_pairwise_continuous,
    is_pairwise_homeomorphism,
    orbit,
    pairwise_continuous_maps,
)
from btdslab.errors import NotInvertible, NotPairwiseContinuous, ShapeMismatch
from btdslab.fintop import FiniteTopology, enumerate_topologies

from conftest import brute_continuous

TOPS = [t for n in (1, 2, 3) for t in enumerate_topologies(n)]


def test_identity_continuous():
    for t in TOPS:
        assert is_continuous(t, t, PointMap.identity(t.n))[0]


def test_example_F_pairwise_continuous(ex_X, ex_Y, ex_maps):
    assert is_continuous(ex_X.t1, ex_Y.t1, ex_maps["F"])[0]
    assert is_pairwise_continuous(ex_X, ex_Y, ex_maps["F"]) == (True, None)


def test_example_g_fails_psi1_with_witness(ex_Y, ex_maps):
    ok, w = is_continuous(ex_Y.t1, ex_Y.t1, ex_maps["g"])
    assert not ok and w == 0b001
    assert ex_maps["g"].preimage(0b001) == 0b100
    assert is_pairwise_continuous(ex_Y, ex_Y, ex_maps["g"]) == (False, (1, 0b001))


def test_into_indiscrete_always_continuous():
    ind = FiniteTopology.indiscrete(2)
    dst = BitopSpace(ind, ind)
    for S in enumerate_spaces(2):
        assert len(pairwise_continuous_maps(S, dst)) == 4


def test_example_compositions(ex_maps):
    f, g, F = ex_maps["f"], ex_maps["g"], ex_maps["F"]
    assert compose(F, f).table == (1, 1, 1, 1)
    assert compose(g, F).table == (1, 2, 0, 0)
    assert compose(PointMap.identity(3), g) == g


def test_compose_shape_mismatch(ex_maps):
    with pytest.raises(ShapeMismatch):
        compose(ex_maps["F"], ex_maps["g"])


def test_forward_orbits(ex_X, ex_maps):
    ind = FiniteTopology.indiscrete(3)
    cyc = Btds.build(BitopSpace(ind, ind), ex_maps["g"])
    o = orbit(cyc, 0)
    assert o.points == (0, 1, 2) and o.period == 3 and o.preperiod == 0
    const = Btds.build(ex_X, ex_maps["f"])
    o = orbit(const, 0)
    assert o.points == (0, 1) and o.period == 1 and o.cycle == (1,)


def test_backward_orbit_of_cycle(ex_maps):
    ind = FiniteTopology.indiscrete(3)
    cyc = Btds.build(BitopSpace(ind, ind), ex_maps["g"])
    o = orbit(cyc, 0, "backward")
    assert o.points == (0, 2, 1) and o.period == 3
    assert set(orbit(cyc, 0, "full").points) == {0, 1, 2}


def test_backward_needs_homeomorphism(ex_X, ex_maps):
    with pytest.raises(NotInvertible):
        orbit(Btds.build(ex_X, ex_maps["f"]), 0, "backward")


def test_build_rejects_discontinuous(ex_Y, ex_maps):
    with pytest.raises(NotPairwiseContinuous):
        Btds.build(ex_Y, ex_maps["g"])
    assert not Btds.unchecked(ex_Y, ex_maps["g"]).certified


def test_orbit_budget():
    ind = FiniteTopology.indiscrete(3)
    cyc = Btds.build(BitopSpace(ind, ind), PointMap(3, 3, (1, 2, 0)))
    o = orbit(cyc, 0, budget=2)
    assert o.period is None and len(o.points) == 2


@pytest.mark.parametrize("src", TOPS, ids=lambda t: str(t.min_nbhd))
def test_continuity_against_brute_force(src):
    for dst in TOPS:
        if dst.n > 2 and src.n > 2:
            continue
        for m in all_maps(src.n, dst.n):
            assert is_continuous(src, dst, m)[0] == brute_continuous(src, dst, m.table)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TOPS), st.data())
def test_composition_of_continuous_is_continuous(t, data):
    maps = [m for m in all_maps(t.n, t.n) if is_continuous(t, t, m)[0]]
    a, b = data.draw(st.sampled_from(maps)), data.draw(st.sampled_from(maps))
    assert is_continuous(t, t, compose(a, b))[0]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TOPS), st.data())
def test_image_preimage_galois(t, data):
    m = data.draw(st.sampled_from(list(all_maps(t.n, t.n))))
    a = data.draw(st.integers(min_value=0, max_value=t.full))
    assert a & ~m.preimage(m.image(a)) == 0
    assert m.image(m.preimage(a)) & ~a == 0


def test_homeomorphism_detection():
    d = FiniteTopology.discrete(2)
    S = BitopSpace(d, d)
    assert is_pairwise_homeomorphism(S, PointMap(2, 2, (1, 0)))
    assert not is_pairwise_homeomorphism(S, PointMap(2, 2, (0, 0)))


def test_point_map_shape_checks():
    with pytest.raises(ShapeMismatch):
        PointMap(2, 2, (0,))
    with pytest.raises(ShapeMismatch):
        PointMap(2, 2, (0, 2))
    assert list(product(range(2), repeat=2)) == [m.table for m in all_maps(2, 2)]
