from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdslab.bitop import (
    BitopSpace,
    Verdict,
    axiom_vector,
    check_regular_hausdorff_inclusion,
    enumerate_spaces,
    is_locally_compact_wrt,
    is_pairwise_hausdorff,
    is_pairwise_hausdorff_one_sided,
    is_pairwise_locally_compact,
    is_pairwise_p_space,
    is_pairwise_regular,
    is_pairwise_t1,
    is_pairwise_t3,
    is_regular_wrt,
)
from btdslab.fintop import FiniteTopology

from conftest import brute_opens

SPACES3 = [S for n in (1, 2, 3) for S in enumerate_spaces(n)]


def _has(x, u):
    return (u >> x) & 1


def brute_t1(S: BitopSpace) -> bool:
    o1, o2 = brute_opens(S.t1), brute_opens(S.t2)
    return all(
        any(_has(x, u) and not _has(y, u) for u in o1) and any(_has(y, v) and not _has(x, v) for v in o2)
        for x in range(S.n)
        for y in range(S.n)
        if x != y
    )


def brute_regular(S: BitopSpace, i: int) -> bool:
    oi, oj = brute_opens(S.topology(i)), brute_opens(S.topology(3 - i))
    closed = [S.full & ~u for u in oi]
    return all(
        any(_has(x, u) and p & ~v == 0 and u & v == 0 for u in oi for v in oj)
        for x in range(S.n)
        for p in closed
        if not _has(x, p)
    )


def brute_hausdorff(S: BitopSpace) -> bool:
    o1, o2 = brute_opens(S.t1), brute_opens(S.t2)

    def sep(a, b, x, y):
        return any(_has(x, u) and _has(y, v) and u & v == 0 for u in a for v in b)

    return all(sep(o1, o2, x, y) and sep(o2, o1, x, y) for x in range(S.n) for y in range(S.n) if x != y)


def test_discrete_pair_is_everything():
    d = FiniteTopology.discrete(2)
    S = BitopSpace(d, d)
    assert is_pairwise_t1(S)[0] and is_pairwise_t3(S)[0] and is_pairwise_hausdorff(S)[0]
    assert is_regular_wrt(S, 1)[0] and is_regular_wrt(S, 2)[0]


def test_indiscrete_factor_breaks_t1():
    for n in (2, 3):
        S = BitopSpace(FiniteTopology.discrete(n), FiniteTopology.indiscrete(n))
        assert not is_pairwise_t1(S)[0]
        assert not is_pairwise_t3(S)[0]


def test_example_y_not_t1(ex_Y):
    ok, w = is_pairwise_t1(ex_Y)
    assert not ok
    # canonical-minimum ordered pair: points 1 and 1/2
    assert w == (0, 1)
    # the pair (1/2, 1/3) is also unseparated
    o1 = brute_opens(ex_Y.t1)
    assert not any(_has(1, u) and not _has(2, u) for u in o1) or not any(
        _has(2, v) and not _has(1, v) for v in brute_opens(ex_Y.t2)
    )


def test_sierpinski_indiscrete_not_regular(sierpinski):
    S = BitopSpace(sierpinski, FiniteTopology.indiscrete(2))
    ok, w = is_regular_wrt(S, 1)
    assert not ok and w == (0, 0b10)
    assert not is_pairwise_t3(S)[0]


def test_indiscrete_source_is_regular():
    for t in (FiniteTopology.discrete(3), FiniteTopology.indiscrete(3)):
        assert is_regular_wrt(BitopSpace(FiniteTopology.indiscrete(3), t), 1)[0]


def test_local_compactness_always(ex_Y):
    assert is_pairwise_locally_compact(ex_Y)
    assert all(is_locally_compact_wrt(S, 1) for S in SPACES3)


def test_inclusion_examples(sierpinski):
    d = FiniteTopology.discrete(2)
    assert check_regular_hausdorff_inclusion(BitopSpace(d, d)).verdict is Verdict.CONFIRMED
    S = BitopSpace(sierpinski, FiniteTopology.indiscrete(2))
    assert check_regular_hausdorff_inclusion(S).verdict is Verdict.VACUOUS
    for n in (2, 3):
        rep = check_regular_hausdorff_inclusion(BitopSpace(FiniteTopology.indiscrete(n), FiniteTopology.discrete(n)))
        assert rep.verdict is not Verdict.VIOLATED


def test_inclusion_never_violated_up_to_three_points():
    verdicts = [check_regular_hausdorff_inclusion(S) for S in SPACES3]
    assert all(r.verdict is not Verdict.VIOLATED for r in verdicts)
    # frozen: 855 vacuous, 3 confirmed (discrete pairs)
    assert sum(r.verdict is Verdict.CONFIRMED for r in verdicts) == 3
    assert sum(r.verdict is Verdict.VACUOUS for r in verdicts) == 855


def test_one_sided_reading_breaks_inclusion():
    # the weaker Hausdorff reading admits spaces where tau1 is not inside tau2
    verdicts = [(S, check_regular_hausdorff_inclusion(S)) for S in SPACES3]
    bad = [(S, r) for S, r in verdicts if r.one_sided_verdict is Verdict.VIOLATED]
    assert len(bad) == 20
    for S, r in bad:
        u = sum(1 << p for p in r.one_sided_witness)
        assert u in brute_opens(S.t1) and u not in brute_opens(S.t2)
        assert is_pairwise_regular(S)[0] and is_pairwise_hausdorff_one_sided(S)[0]


@pytest.mark.parametrize("S", SPACES3, ids=lambda S: str(S.key))
def test_axioms_against_brute_force(S):
    assert is_pairwise_t1(S)[0] == brute_t1(S)
    assert is_regular_wrt(S, 1)[0] == brute_regular(S, 1)
    assert is_regular_wrt(S, 2)[0] == brute_regular(S, 2)
    assert is_pairwise_hausdorff(S)[0] == brute_hausdorff(S)
    assert is_pairwise_t3(S)[0] == (brute_t1(S) and brute_regular(S, 1) and brute_regular(S, 2))


def test_finite_spaces_are_p_spaces():
    assert all(is_pairwise_p_space(S) for S in SPACES3)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SPACES3))
def test_symmetric_hausdorff_implies_one_sided(S):
    if is_pairwise_hausdorff(S)[0]:
        assert is_pairwise_hausdorff_one_sided(S)[0]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SPACES3))
def test_swap_exchanges_regularity(S):
    assert is_regular_wrt(S, 1)[0] == is_regular_wrt(S.swapped(), 2)[0]
    assert axiom_vector(S)["pairwise_T1"] == axiom_vector(S.swapped())["pairwise_T1"]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SPACES3))
def test_witness_is_a_real_violation(S):
    ok, w = is_pairwise_t1(S)
    if not ok:
        x, y = w
        assert x != y
        sep1 = any(_has(x, u) and not _has(y, u) for u in S.t1.opens)
        sep2 = any(_has(y, v) and not _has(x, v) for v in S.t2.opens)
        assert not (sep1 and sep2)


def test_mismatched_ground_sets():
    with pytest.raises(ValueError):
        BitopSpace(FiniteTopology.discrete(2), FiniteTopology.discrete(3))
