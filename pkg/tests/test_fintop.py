from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdslab.errors import CapExceeded, StrictNotATopology
from btdslab.fintop import (
    Cover,
    FiniteTopology,
    brute_closure,
    enumerate_all_covers,
    enumerate_irredundant_covers,
    enumerate_opens,
    enumerate_topologies,
    from_open_family,
    is_irredundant,
    members,
    relabel,
    topologies_by_family_filter,
)

from conftest import brute_opens

ALL3 = list(enumerate_topologies(3))


def test_psi1_from_family(psi1):
    assert psi1.min_nbhd == (0b001, 0b011, 0b111)


def test_indiscrete_and_discrete_from_family():
    assert from_open_family(2, [0, 0b11]).min_nbhd == (0b11, 0b11)
    assert from_open_family(3, range(8)).min_nbhd == (0b001, 0b010, 0b100)


def test_strict_rejects_non_topology():
    with pytest.raises(StrictNotATopology):
        from_open_family(3, [0, 0b001, 0b010, 0b111], strict=True)
    with pytest.raises(StrictNotATopology):
        from_open_family(2, [0b01, 0b11], strict=True)


def test_lenient_generates_topology():
    t = from_open_family(3, [0, 0b001, 0b010, 0b111])
    assert 0b011 in t.opens


def test_closure_examples(psi1):
    assert psi1.closure(0b010) == 0b110
    assert FiniteTopology.indiscrete(3).closure(0b001) == 0b111
    assert FiniteTopology.discrete(3).closure(0b001) == 0b001


def test_enumerate_opens_examples(psi1):
    assert enumerate_opens(psi1) == [0, 0b001, 0b011, 0b111]
    assert enumerate_opens(FiniteTopology.indiscrete(2)) == [0, 0b11]
    assert enumerate_opens(FiniteTopology.discrete(2)) == [0, 0b01, 0b10, 0b11]


def test_irredundant_cover_examples(psi1):
    disc = enumerate_irredundant_covers(FiniteTopology.discrete(2))
    assert [c.members for c in disc] == [(0b11,), (0b01, 0b10)]
    assert [c.members for c in enumerate_irredundant_covers(FiniteTopology.indiscrete(3))] == [(0b111,)]
    assert [c.members for c in enumerate_irredundant_covers(psi1)] == [(0b111,)]


def test_topology_counts_against_family_filter():
    for n, want in ((1, 1), (2, 4), (3, 29)):
        tops = list(enumerate_topologies(n))
        assert len(tops) == want
        assert {frozenset(t.opens) for t in tops} == set(topologies_by_family_filter(n))


def test_four_point_count():
    assert sum(1 for _ in enumerate_topologies(4)) == 355


def test_caps():
    with pytest.raises(CapExceeded):
        list(enumerate_topologies(5))
    with pytest.raises(CapExceeded):
        enumerate_all_covers(FiniteTopology.discrete(5))


@pytest.mark.parametrize("t", ALL3, ids=lambda t: str(t.min_nbhd))
def test_irredundant_covers_match_all_subsets_filter(t):
    brute = [c for c in enumerate_all_covers(t) if is_irredundant(c, t.full)]
    assert brute == list(t.irredundant_covers)


@pytest.mark.parametrize("t", ALL3, ids=lambda t: str(t.min_nbhd))
def test_opens_and_closure_against_brute_force(t):
    assert list(t.opens) == brute_opens(t)
    for a in range(1 << t.n):
        assert t.closure(a) == brute_closure(t, a)


topologies = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.sampled_from(list(enumerate_topologies(n)))
)


@settings(max_examples=200, deadline=None)
@given(topologies, st.data())
def test_open_predicate_matches_min_nbhd_rule(t, data):
    u = data.draw(st.integers(min_value=0, max_value=t.full))
    rule = all(t.min_nbhd[p] & ~u == 0 for p in members(u))
    assert t.is_open(u) == rule == (u in t.opens)


@settings(max_examples=200, deadline=None)
@given(topologies)
def test_min_nbhd_invariants(t):
    for p, m in enumerate(t.min_nbhd):
        assert (m >> p) & 1
        for q in members(m):
            assert t.min_nbhd[q] & ~m == 0


@settings(max_examples=100, deadline=None)
@given(topologies)
def test_round_trip_through_open_family(t):
    assert from_open_family(t.n, t.opens, strict=True) == t


@settings(max_examples=100, deadline=None)
@given(topologies, st.data())
def test_closure_is_kuratowski(t, data):
    a = data.draw(st.integers(min_value=0, max_value=t.full))
    b = data.draw(st.integers(min_value=0, max_value=t.full))
    c = t.closure
    assert c(0) == 0
    assert a & ~c(a) == 0
    assert c(c(a)) == c(a)
    assert c(a | b) == c(a) | c(b)


@settings(max_examples=100, deadline=None)
@given(topologies, st.permutations(range(4)))
def test_relabel_preserves_open_count(t, perm):
    perm = [p for p in perm if p < t.n]
    assert len(relabel(t, perm).opens) == len(t.opens)


def test_cover_union():
    assert Cover((0b01, 0b10)).union == 0b11
