"""Homotopy-anchored selection properties on finite bitopological spaces.

Two independent decision routes are kept side by side:

* the *characterization* checks each irredundant source cover once, assuming
  the selector may use every admissible member (a constant adversary sequence
  repeats forever, so it can);
* the *bounded oracle* lets the adversary play every word of covers up to a
  given length, repeated, and searches the selector's moves round by round.

A disagreement between the two raises ``OracleDisagreement``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Literal, Sequence

from btdslab import kernels
from btdslab.bitop import BitopSpace
from btdslab.errors import CapExceeded, LabError, OracleDisagreement
from btdslab.fintop import Cover, FiniteTopology, PointSet, enumerate_all_covers, members

ORACLE_MAX_OPENS = 12
ORACLE_MAX_COVERS = 64
DEFAULT_ORACLE_LEN = 3
CHARACTERIZATION_CAP = 6


class UnverifiedContext(LabError):
    pass


class Target(str, Enum):
    OPEN = "O"  # open covers in the other topology
    CLOSURE = "O_bar"  # closures of members cover
    DENSE = "O_D"  # closure of the union is everything
    REFINE = "refine"  # other-topology opens refining the cover, covering everything


class Mode(str, Enum):
    SINGLE = "single"
    FINITE = "finite"


@dataclass(frozen=True)
class FamilyKind:
    target: Target
    i: int
    j: int

    def __post_init__(self) -> None:
        if {self.i, self.j} != {1, 2}:
            raise ValueError("family indices must be 1 and 2 in some order")


def family_member(kind: FamilyKind, Y: BitopSpace, fam: Sequence[PointSet]) -> bool:
    """Membership of ``fam`` in the cover family named by ``kind``."""
    ti, tj = Y.topology(kind.i), Y.topology(kind.j)
    union = 0
    for u in fam:
        union |= u
    if kind.target is Target.OPEN:
        return all(tj.is_open(u) for u in fam) and union == Y.full
    if not all(ti.is_open(u) for u in fam):
        return False
    if kind.target is Target.CLOSURE:
        reach = 0
        for u in fam:
            reach |= tj.closure(u)
        return reach == Y.full
    if kind.target is Target.DENSE:
        return tj.closure(union) == Y.full
    raise ValueError(f"{kind.target} is not a named cover family")


Anchor = tuple[int | None, int]


@dataclass(frozen=True)
class Context:
    """Anchor data extracted from a verified homotopy.

    Each anchor is ``(start, end)``: the homotopy's value at time 0 and at
    time 1 for one point of the domain.
    """

    kind: Literal["H", "HI", "PH"]
    anchors: tuple[Anchor, ...]
    verified: bool
    name: str = ""

    def __post_init__(self) -> None:
        if not self.anchors:
            raise ValueError("a context needs at least one anchor")


@dataclass(frozen=True)
class SelectionProblem:
    Y: BitopSpace
    i: int
    target: FamilyKind
    mode: Mode
    anchors: tuple[Anchor, ...] | None  # None: classical, no anchoring
    context: str = "H"
    anchor_reading: Literal["per-set", "union"] = "per-set"
    target_openness: Literal["strict", "cover-only"] = "strict"


@dataclass
class SelectionReport:
    verdict: bool
    method: str
    selection_rule: dict[str, list[list[int]]] | None = None
    refuting_cover: list[list[int]] | None = None
    refuting_anchor: int | None = None
    uncovered: list[int] | None = None
    oracle_verdict: bool | None = None
    oracle_word: list[list[list[int]]] | None = None
    directions: dict[str, "SelectionReport"] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "method": self.method,
            "selection_rule": self.selection_rule,
            "refuting_cover": self.refuting_cover,
            "refuting_anchor": self.refuting_anchor,
            "uncovered": self.uncovered,
            "oracle_verdict": self.oracle_verdict,
            "oracle_word": self.oracle_word,
        }
        if self.directions:
            out["directions"] = {k: v.to_dict() for k, v in self.directions.items()}
        return out


# ---------------------------------------------------------------- engine


@dataclass(frozen=True)
class _Spec:
    """Hashable core of a selection problem for one direction."""

    src: FiniteTopology
    other: FiniteTopology
    target: Target
    mode: Mode
    anchors: tuple[Anchor, ...] | None
    per_set: bool
    strict: bool


def _admissible(spec: _Spec, cover: Cover) -> list[PointSet]:
    if spec.target is Target.REFINE:
        return [v for v in spec.other.opens if v and any(v & ~u == 0 for u in cover.members)]
    if spec.target is Target.OPEN and spec.strict:
        return [u for u in cover.members if spec.other.is_open(u)]
    return list(cover.members)


def _contrib(spec: _Spec, u: PointSet) -> PointSet:
    return spec.other.closure(u) if spec.target is Target.CLOSURE else u


def _reached(spec: _Spec, fam: Sequence[PointSet]) -> PointSet:
    acc = 0
    for u in fam:
        acc |= _contrib(spec, u)
    if spec.target is Target.DENSE:
        acc = spec.other.closure(acc)
    return acc


def _selected(spec: _Spec, cover: Cover, anchor: int | None) -> list[PointSet] | None:
    """Sets a selector uses against this cover forever, or None when no legal move exists."""
    adm = _admissible(spec, cover)
    if anchor is None:
        if spec.mode is Mode.SINGLE and not adm:
            return None
        return adm
    if spec.mode is Mode.SINGLE and spec.per_set:
        adm = [u for u in adm if (u >> anchor) & 1]
    if not any((u >> anchor) & 1 for u in adm):
        return None
    return adm


def _characterize(spec: _Spec, covers: Sequence[Cover]):
    full = spec.src.full
    rule: dict[str, list[list[int]]] = {}
    anchors = spec.anchors if spec.anchors is not None else ((None, None),)
    for start, end in anchors:
        for c in covers:
            if start is not None and not (c.union >> start) & 1:
                continue  # side condition fails: nothing is demanded
            sel = _selected(spec, c, end)
            if sel is None:
                return False, None, (c, end, members(full))
            missing = full & ~_reached(spec, sel)
            if missing:
                return False, None, (c, end, members(missing))
            key = f"anchor={end}|cover={[members(m) for m in c.members]}"
            rule[key] = [members(u) for u in sel]
    return True, rule, None


def _moves(spec: _Spec, cover: Cover, anchor: int | None) -> list[tuple[int, int]]:
    adm = _admissible(spec, cover)
    hit = lambda u: 1 if anchor is not None and (u >> anchor) & 1 else 0  # noqa: E731
    if spec.mode is Mode.SINGLE:
        if anchor is not None and spec.per_set:
            adm = [u for u in adm if hit(u)]
        return sorted({(_contrib(spec, u), hit(u)) for u in adm})
    moves = set()
    for r in range(len(adm) + 1):
        for sub in combinations(adm, r):
            c = 0
            h = 0
            for u in sub:
                c |= _contrib(spec, u)
                h |= hit(u)
            if anchor is not None and spec.per_set and not h:
                continue
            moves.add((c, h))
    return sorted(moves)


def _accept_table(spec: _Spec, anchor: int | None) -> list[bool]:
    n = spec.src.n
    full = spec.src.full
    out = []
    for s in range(1 << (n + 1)):
        acc, flag = s >> 1, s & 1
        if spec.target is Target.DENSE:
            acc = spec.other.closure(acc)
        ok = acc == full
        if anchor is not None and not spec.per_set:
            ok = ok and flag == 1
        out.append(ok)
    return out


def _oracle(spec: _Spec, covers: Sequence[Cover], max_len: int):
    """Bounded adversary over words of length <= ``max_len``; returns (verdict, word, anchor)."""
    anchors = spec.anchors if spec.anchors is not None else ((None, None),)
    for start, end in anchors:
        # a cover missing the start point makes every word containing it vacuous
        alphabet = [c for c in covers if start is None or (c.union >> start) & 1]
        if not alphabet:
            continue
        choices = [_moves(spec, c, end) for c in alphabet]
        reps = max(1, max(len(_admissible(spec, c)) for c in alphabet))
        word = kernels.oracle_search(choices, max_len, reps, _accept_table(spec, end))
        if word is not None:
            return False, [alphabet[w] for w in word], end
    return True, None, None


def oracle_bounded(p: SelectionProblem, max_len: int, all_covers: bool = False) -> bool:
    spec = _spec_of(p)
    covers = _adversary(spec, all_covers, oracle=True)
    return _oracle(spec, covers, max_len)[0]


def _adversary(spec: _Spec, all_covers: bool, oracle: bool) -> list[Cover]:
    if spec.src.n > CHARACTERIZATION_CAP:
        raise CapExceeded(f"{spec.src.n} points exceeds the selection cap")
    covers = enumerate_all_covers(spec.src) if all_covers else list(spec.src.irredundant_covers)
    if oracle and (len(spec.src.opens) > ORACLE_MAX_OPENS or len(covers) > ORACLE_MAX_COVERS):
        raise CapExceeded("space exceeds the oracle caps")
    return covers


def within_oracle_caps(t: FiniteTopology) -> bool:
    return (
        t.n <= CHARACTERIZATION_CAP
        and len(t.opens) <= ORACLE_MAX_OPENS
        and len(t.irredundant_covers) <= ORACLE_MAX_COVERS
    )


def _spec_of(p: SelectionProblem) -> _Spec:
    if p.target.i != p.i:
        raise ValueError("target family must be sourced from the selecting topology")
    anchors = None if p.anchors is None else tuple(sorted(set(p.anchors), key=_anchor_key))
    return _Spec(
        p.Y.topology(p.i),
        p.Y.topology(p.target.j),
        p.target.target,
        p.mode,
        anchors,
        p.anchor_reading == "per-set",
        p.target_openness == "strict",
    )


def _anchor_key(a: Anchor) -> tuple[int, int]:
    return (a[1], -1 if a[0] is None else a[0])


def _fmt_cover(c: Cover) -> list[list[int]]:
    return [members(m) for m in c.members]


@lru_cache(maxsize=200_000)
def _decide(spec: _Spec, oracle_len: int, use_oracle: bool, all_covers: bool) -> SelectionReport:
    covers = _adversary(spec, all_covers, oracle=False)
    ok, rule, refute = _characterize(spec, covers)
    report = SelectionReport(ok, "characterization", selection_rule=rule)
    if refute is not None:
        c, anchor, missing = refute
        report.refuting_cover = _fmt_cover(c)
        report.refuting_anchor = anchor
        report.uncovered = missing
    if use_oracle:
        o_ok, word, _ = _oracle(spec, covers, oracle_len)
        o1_ok, _, _ = _oracle(spec, covers, 1)
        if not (o_ok == o1_ok == ok):
            raise OracleDisagreement(
                f"characterization={ok}, oracle(L=1)={o1_ok}, oracle(L={oracle_len})={o_ok} "
                f"for target={spec.target.value} mode={spec.mode.value} anchors={spec.anchors} "
                f"src={spec.src.min_nbhd} other={spec.other.min_nbhd}"
            )
        report.method = "both"
        report.oracle_verdict = o_ok
        if word is not None:
            report.oracle_word = [_fmt_cover(c) for c in word]
    return report


def decide_selection(
    p: SelectionProblem,
    oracle_len: int = DEFAULT_ORACLE_LEN,
    use_oracle: bool | None = None,
    all_covers: bool = False,
) -> SelectionReport:
    """Decide one direction; the oracle runs whenever the source topology is within its caps."""
    spec = _spec_of(p)
    if use_oracle is None:
        use_oracle = within_oracle_caps(spec.src)
    return _decide(spec, oracle_len, use_oracle, all_covers)


# ---------------------------------------------------------------- properties

H_PROPERTIES = {
    "Rothberger": (Mode.SINGLE, Target.OPEN),
    "almost_Rothberger": (Mode.SINGLE, Target.CLOSURE),
    "weak_Rothberger": (Mode.SINGLE, Target.DENSE),
    "Menger": (Mode.FINITE, Target.OPEN),
    "almost_Menger": (Mode.FINITE, Target.CLOSURE),
    "weak_Menger": (Mode.FINITE, Target.DENSE),
}


def _normalize(prop: str) -> str:
    for prefix in ("H_", "HI_", "PH_", "H-", "HI-", "PH-"):
        if prop.startswith(prefix):
            prop = prop[len(prefix) :]
    prop = prop.replace("-", "_")
    for name in H_PROPERTIES:
        if name.lower() == prop.lower():
            return name
    raise KeyError(f"unknown selection property {prop!r}")


def _both_directions(Y, make, **kw) -> SelectionReport:
    dirs = {}
    for i, j in ((1, 2), (2, 1)):
        dirs[f"{i}{j}"] = decide_selection(make(i, j), **kw)
    ok = all(r.verdict for r in dirs.values())
    method = "both" if all(r.method == "both" for r in dirs.values()) else "characterization"
    first_bad = next((r for r in dirs.values() if not r.verdict), None)
    out = SelectionReport(ok, method, directions=dirs)
    if first_bad is not None:
        out.refuting_cover = first_bad.refuting_cover
        out.refuting_anchor = first_bad.refuting_anchor
        out.uncovered = first_bad.uncovered
    return out


def decide_anchored_property(
    Y: BitopSpace,
    prop: str,
    context: Context,
    force: bool = False,
    anchor_reading: str = "per-set",
    target_openness: str = "strict",
    **kw,
) -> SelectionReport:
    """Conjunction of the (1,2) and (2,1) directions for an H, HI or PH context."""
    if not context.verified and not force:
        raise UnverifiedContext(f"context {context.name or context.kind} is not a verified homotopy")
    for a0, a1 in context.anchors:
        if not 0 <= a1 < Y.n or (a0 is not None and not 0 <= a0 < Y.n):
            raise ValueError("anchor outside the space")
    mode, target = H_PROPERTIES[_normalize(prop)]
    return _both_directions(
        Y,
        lambda i, j: SelectionProblem(
            Y, i, FamilyKind(target, i, j), mode, context.anchors, context.kind,
            anchor_reading, target_openness,  # type: ignore[arg-type]
        ),
        **kw,
    )


def decide_h_property(Y: BitopSpace, prop: str, context: Context, **kw) -> SelectionReport:
    if context.kind not in ("H", "HI"):
        raise ValueError("H properties need an H or HI context")
    return decide_anchored_property(Y, prop, context, **kw)


def decide_ph_property(Y: BitopSpace, prop: str, context: Context, **kw) -> SelectionReport:
    if context.kind != "PH":
        raise ValueError("PH properties need a path-homotopy context")
    return decide_anchored_property(Y, prop, context, **kw)


def _classical(Y, i, j, mode, target, **kw) -> SelectionReport:
    return decide_selection(SelectionProblem(Y, i, FamilyKind(target, i, j), mode, None, "classical"), **kw)


def delta2_menger(Y: BitopSpace, **kw) -> SelectionReport:
    """Both directions: refine every source cover by other-topology opens covering the space."""
    return _both_directions(
        Y, lambda i, j: SelectionProblem(Y, i, FamilyKind(Target.REFINE, i, j), Mode.FINITE, None, "classical"), **kw
    )


def weakly_menger(Y: BitopSpace, i: int, j: int, **kw) -> SelectionReport:
    return _classical(Y, i, j, Mode.FINITE, Target.DENSE, **kw)


def almost_menger(Y: BitopSpace, i: int, j: int, **kw) -> SelectionReport:
    return _classical(Y, i, j, Mode.FINITE, Target.CLOSURE, **kw)


def almost_rothberger(Y: BitopSpace, i: int, j: int, **kw) -> SelectionReport:
    return _classical(Y, i, j, Mode.SINGLE, Target.CLOSURE, **kw)


CLASSICAL_PROPERTIES = ("delta2_Menger", "weakly_Menger", "almost_Menger", "almost_Rothberger")


def classical_vector(Y: BitopSpace, **kw) -> dict[str, SelectionReport]:
    out = {"delta2_Menger": delta2_menger(Y, **kw)}
    for name, fn in (
        ("weakly_Menger", weakly_menger),
        ("almost_Menger", almost_menger),
        ("almost_Rothberger", almost_rothberger),
    ):
        dirs = {f"{i}{j}": fn(Y, i, j, **kw) for i, j in ((1, 2), (2, 1))}
        ok = all(r.verdict for r in dirs.values())
        method = "both" if all(r.method == "both" for r in dirs.values()) else "characterization"
        out[name] = SelectionReport(ok, method, directions=dirs)
    return out


# arrows of the implication diagram, Rothberger-type row into Menger-type row
IMPLICATIONS = (
    ("Rothberger", "almost_Rothberger"),
    ("almost_Rothberger", "weak_Rothberger"),
    ("Menger", "almost_Menger"),
    ("almost_Menger", "weak_Menger"),
    ("Rothberger", "Menger"),
    ("almost_Rothberger", "almost_Menger"),
    ("weak_Rothberger", "weak_Menger"),
)
