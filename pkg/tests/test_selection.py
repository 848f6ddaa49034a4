from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btdslab.bitop import BitopSpace, enumerate_spaces
from btdslab.contexts import context_library, h_context
from btdslab.fintop import FiniteTopology
from btdslab.homotopy import Homotopy, standard_interval
from btdslab.fintop import enumerate_all_covers
from btdslab.selection import (
    ORACLE_MAX_COVERS,
    CLASSICAL_PROPERTIES,
    H_PROPERTIES,
    IMPLICATIONS,
    Context,
    FamilyKind,
    Mode,
    SelectionProblem,
    Target,
    UnverifiedContext,
    almost_rothberger,
    classical_vector,
    decide_anchored_property,
    decide_h_property,
    decide_ph_property,
    decide_selection,
    delta2_menger,
    family_member,
    oracle_bounded,
)

SPACES3 = [S for n in (1, 2, 3) for S in enumerate_spaces(n)]
SPACES2 = [S for S in SPACES3 if S.n <= 2]
A, B = 0b01, 0b10


def point_context(y: int) -> Context:
    return Context("H", ((y, y),), True, f"point:{y}")


def test_family_membership(ab):
    closure12 = FamilyKind(Target.CLOSURE, 1, 2)
    open12 = FamilyKind(Target.OPEN, 1, 2)
    dense12 = FamilyKind(Target.DENSE, 1, 2)
    assert family_member(closure12, ab, [A])
    assert not family_member(open12, ab, [A])
    assert family_member(dense12, ab, [A])
    for kind in (closure12, open12, dense12):
        assert family_member(kind, ab, [ab.full])
        assert not family_member(kind, ab, [0])


def test_ab_almost_rothberger_core(ab):
    p = SelectionProblem(ab, 1, FamilyKind(Target.CLOSURE, 1, 2), Mode.SINGLE, ((0, 0),))
    rep = decide_selection(p)
    assert rep.verdict and rep.method == "both"


def test_ab_rothberger_core_refuted(ab):
    p = SelectionProblem(ab, 1, FamilyKind(Target.OPEN, 1, 2), Mode.SINGLE, ((0, 0),))
    rep = decide_selection(p)
    assert not rep.verdict
    assert rep.refuting_cover == [[0], [1]]
    assert not oracle_bounded(p, 1)


def test_indiscrete_source_everything_true():
    ind = FiniteTopology.indiscrete(2)
    Y = BitopSpace(ind, ind)
    for prop in H_PROPERTIES:
        assert decide_h_property(Y, prop, point_context(0)).verdict


def test_one_point_all_true():
    Y = BitopSpace.point()
    for prop in H_PROPERTIES:
        assert decide_h_property(Y, prop, point_context(0)).verdict
    assert all(r.verdict for r in classical_vector(Y).values())


def test_ab_strict_implication_witness(ab):
    ctx = point_context(0)
    assert decide_h_property(ab, "almost_Rothberger", ctx).verdict
    assert not decide_h_property(ab, "Rothberger", ctx).verdict
    assert not decide_h_property(ab, "Menger", ctx).verdict


def test_ph_mirrors_h_on_ab(ab):
    ph = Context("PH", ((0, 0),), True)
    for prop in H_PROPERTIES:
        assert decide_ph_property(ab, prop, ph).verdict == decide_h_property(ab, prop, point_context(0)).verdict


def test_context_kind_guards(ab):
    with pytest.raises(ValueError):
        decide_h_property(ab, "Menger", Context("PH", ((0, 0),), True))
    with pytest.raises(UnverifiedContext):
        decide_h_property(ab, "Menger", Context("H", ((0, 0),), False))


def test_classical_examples(ab):
    d = FiniteTopology.discrete(3)
    assert all(r.verdict for r in classical_vector(BitopSpace(d, d)).values())
    # the (2,1) direction has the single cover {Y}, refined by Y itself
    assert delta2_menger(ab).directions["21"].verdict
    # (1,2): the cover {{a},{b}} has no refinement by nonempty indiscrete opens
    assert not delta2_menger(ab).directions["12"].verdict
    assert almost_rothberger(ab, 1, 2).verdict
    assert set(classical_vector(ab)) == set(CLASSICAL_PROPERTIES)


def test_context_library_on_ab(ab):
    lib = context_library(ab)
    names = [b.name for b in lib]
    assert "path:0->0" in names
    assert all(b.h.verified and b.ph.verified for b in lib)


def test_h_context_from_example_search(ex_X, ex_Y, ex_maps):
    table = ((1, 0, 1), (1, 0, 2), (1, 0, 0), (1, 0, 0))
    H = Homotopy(ex_X, ex_Y, standard_interval(1), ex_maps["F"], table)
    ctx = h_context(H, ex_maps["f"], ex_maps["g"])
    assert ctx.verified
    assert ctx.anchors == ((1, 0), (1, 1), (1, 2))


problems = st.tuples(
    st.sampled_from(SPACES3),
    st.sampled_from(sorted(H_PROPERTIES)),
    st.sampled_from([(1, 2), (2, 1)]),
    st.data(),
)


def _anchors(draw, n):
    pts = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
    return tuple((p, p) for p in sorted(pts))


@settings(max_examples=300, deadline=None)
@given(problems)
def test_dual_path_and_all_covers_agree(args):
    Y, prop, (i, j), data = args
    mode, target = H_PROPERTIES[prop]
    anchors = _anchors(data.draw, Y.n)
    reading = data.draw(st.sampled_from(["per-set", "union"]))
    openness = data.draw(st.sampled_from(["strict", "cover-only"]))
    p = SelectionProblem(Y, i, FamilyKind(target, i, j), mode, anchors, "H", reading, openness)
    rep = decide_selection(p)  # raises on a split
    assert rep.method == "both"
    if len(enumerate_all_covers(Y.topology(i))) <= ORACLE_MAX_COVERS:
        assert oracle_bounded(p, 3, all_covers=True) == rep.verdict


@settings(max_examples=200, deadline=None)
@given(problems)
def test_oracle_monotone_in_length(args):
    Y, prop, (i, j), _ = args
    mode, target = H_PROPERTIES[prop]
    p = SelectionProblem(Y, i, FamilyKind(target, i, j), mode, ((0, 0),))
    verdicts = [oracle_bounded(p, L) for L in (1, 2, 3, 4)]
    for a, b in zip(verdicts, verdicts[1:]):
        assert a or not b


@settings(max_examples=300, deadline=None)
@given(problems)
def test_anchor_monotonicity(args):
    Y, prop, _, data = args
    big = _anchors(data.draw, Y.n)
    small = tuple(a for a in big if data.draw(st.booleans())) or big[:1]
    v_big = decide_anchored_property(Y, prop, Context("H", big, True)).verdict
    v_small = decide_anchored_property(Y, prop, Context("H", small, True)).verdict
    assert v_small or not v_big


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SPACES3), st.data())
def test_implication_arrows_hold(Y, data):
    ctx = Context("H", _anchors(data.draw, Y.n), True)
    v = {p: decide_h_property(Y, p, ctx).verdict for p in H_PROPERTIES}
    for a, b in IMPLICATIONS:
        assert v[b] or not v[a]


def test_unanchored_classical_is_dual_path():
    for Y in SPACES2:
        for r in classical_vector(Y).values():
            assert r.method == "both"


def test_anchor_range_checked(ab):
    with pytest.raises(ValueError):
        decide_h_property(ab, "Menger", Context("H", ((0, 5),), True))

