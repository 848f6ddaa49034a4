"""Bitopological spaces and pairwise separation axioms.

Every checker returns ``(verdict, witness)``; the witness is ``None`` on
success and a violating tuple otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator

from btdslab.errors import InternalEquivalenceViolation
from btdslab.fintop import FiniteTopology, PointSet, enumerate_topologies, members


@dataclass(frozen=True)
class BitopSpace:
    t1: FiniteTopology
    t2: FiniteTopology

    def __post_init__(self) -> None:
        if self.t1.n != self.t2.n:
            raise ValueError("both topologies must live on the same ground set")

    @property
    def n(self) -> int:
        return self.t1.n

    @property
    def full(self) -> PointSet:
        return self.t1.full

    def topology(self, i: int) -> FiniteTopology:
        if i == 1:
            return self.t1
        if i == 2:
            return self.t2
        raise ValueError(f"topology index must be 1 or 2, got {i}")

    def swapped(self) -> BitopSpace:
        return BitopSpace(self.t2, self.t1)

    @cached_property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.t1.min_nbhd, self.t2.min_nbhd)

    @classmethod
    def point(cls) -> BitopSpace:
        t = FiniteTopology(1, (1,))
        return cls(t, t)


def enumerate_spaces(n: int) -> Iterator[BitopSpace]:
    tops = list(enumerate_topologies(n))
    for t1 in tops:
        for t2 in tops:
            yield BitopSpace(t1, t2)


def is_pairwise_t1(s: BitopSpace) -> tuple[bool, tuple[int, int] | None]:
    """Ordered pair ``(x, y)`` violating separation, scanning ``x`` then ``y``."""
    for x in range(s.n):
        for y in range(s.n):
            if x == y:
                continue
            u_ok = not (s.t1.min_nbhd[x] >> y) & 1
            v_ok = not (s.t2.min_nbhd[y] >> x) & 1
            if not (u_ok and v_ok):
                return False, (x, y)
    return True, None


def _regular_by_definition(ti: FiniteTopology, tj: FiniteTopology):
    for x in range(ti.n):
        for p in ti.closeds:
            if (p >> x) & 1:
                continue
            if not any(
                (u >> x) & 1 and p & ~v == 0 and u & v == 0
                for u in ti.opens
                for v in tj.opens
            ):
                return False, (x, p)
    return True, None


def _regular_by_shrinking(ti: FiniteTopology, tj: FiniteTopology):
    # x in H subset cl_j(H) subset G
    for x in range(ti.n):
        for g in ti.opens:
            if not (g >> x) & 1:
                continue
            if not any((h >> x) & 1 and tj.closure(h) & ~g == 0 for h in ti.opens):
                return False, (x, ti.full & ~g)
    return True, None


def _regular_by_closure_miss(ti: FiniteTopology, tj: FiniteTopology):
    for x in range(ti.n):
        for k in ti.closeds:
            if (k >> x) & 1:
                continue
            if not any((m >> x) & 1 and tj.closure(m) & k == 0 for m in ti.opens):
                return False, (x, k)
    return True, None


def is_regular_wrt(s: BitopSpace, i: int) -> tuple[bool, tuple[int, PointSet] | None]:
    """Whether topology ``i`` is regular with respect to the other one.

    The witness is ``(x, P)``: a point and an ``i``-closed set it cannot be
    separated from. All three equivalent formulations are evaluated; if they
    disagree an InternalEquivalenceViolation is raised.
    """
    ti, tj = s.topology(i), s.topology(3 - i)
    a = _regular_by_definition(ti, tj)
    b = _regular_by_shrinking(ti, tj)
    c = _regular_by_closure_miss(ti, tj)
    if not a[0] == b[0] == c[0]:
        raise InternalEquivalenceViolation(
            f"regularity forms disagree on {s.key}: {a[0]}, {b[0]}, {c[0]}"
        )
    return a


def is_pairwise_regular(s: BitopSpace) -> tuple[bool, tuple | None]:
    for i in (1, 2):
        ok, w = is_regular_wrt(s, i)
        if not ok:
            return False, (i,) + w
    return True, None


def is_pairwise_t3(s: BitopSpace) -> tuple[bool, tuple | None]:
    ok, w = is_pairwise_t1(s)
    if not ok:
        return False, ("T1",) + w
    ok, w = is_pairwise_regular(s)
    if not ok:
        return False, ("regular",) + w
    return True, None


def _hausdorff_sides(s: BitopSpace, x: int, y: int) -> tuple[bool, bool]:
    # disjoint minimal neighbourhoods are the best candidates in a finite space
    fwd = s.t1.min_nbhd[x] & s.t2.min_nbhd[y] == 0
    bwd = s.t2.min_nbhd[x] & s.t1.min_nbhd[y] == 0
    return fwd, bwd


def is_pairwise_hausdorff(s: BitopSpace) -> tuple[bool, tuple[int, int] | None]:
    """Symmetric reading: both (tau1 at x, tau2 at y) and (tau2 at x, tau1 at y) separate."""
    for x in range(s.n):
        for y in range(s.n):
            if x != y and not all(_hausdorff_sides(s, x, y)):
                return False, (x, y)
    return True, None


def is_pairwise_hausdorff_one_sided(s: BitopSpace) -> tuple[bool, tuple[int, int] | None]:
    """Weaker reading: each unordered pair is separated in at least one orientation."""
    for x in range(s.n):
        for y in range(x + 1, s.n):
            fwd, bwd = _hausdorff_sides(s, x, y)
            if not (fwd or bwd):
                return False, (x, y)
    return True, None


def is_locally_compact_wrt(s: BitopSpace, i: int) -> bool:
    s.topology(i)
    # every subset of a finite space is compact
    return True


def is_pairwise_locally_compact(s: BitopSpace) -> bool:
    return is_locally_compact_wrt(s, 1) and is_locally_compact_wrt(s, 2)


def is_p_space(t: FiniteTopology) -> bool:
    # countable unions of closed sets are finite unions here
    closeds = set(t.closeds)
    return all(a | b in closeds for a in closeds for b in closeds)


def is_pairwise_p_space(s: BitopSpace) -> bool:
    return is_p_space(s.t1) and is_p_space(s.t2)


class Verdict(str, Enum):
    VACUOUS = "VACUOUS"
    CONFIRMED = "CONFIRMED"
    VIOLATED = "VIOLATED"


@dataclass(frozen=True)
class InclusionReport:
    verdict: Verdict
    witness: list[int] | None
    one_sided_verdict: Verdict
    one_sided_witness: list[int] | None


def _first_non_inclusion(s: BitopSpace) -> PointSet | None:
    for u in s.t1.opens:
        if not s.t2.is_open(u):
            return u
    return None


def check_regular_hausdorff_inclusion(s: BitopSpace) -> InclusionReport:
    """Pairwise regular + pairwise Hausdorff + local compactness imply tau1 within tau2.

    The verdict under the one-sided Hausdorff reading is recorded alongside.
    """
    base = is_pairwise_regular(s)[0] and is_locally_compact_wrt(s, 1)
    bad = _first_non_inclusion(s)

    def judge(hausdorff: bool) -> tuple[Verdict, list[int] | None]:
        if not (base and hausdorff):
            return Verdict.VACUOUS, None
        if bad is None:
            return Verdict.CONFIRMED, None
        return Verdict.VIOLATED, members(bad)

    v, w = judge(is_pairwise_hausdorff(s)[0])
    ov, ow = judge(is_pairwise_hausdorff_one_sided(s)[0])
    return InclusionReport(v, w, ov, ow)


def axiom_vector(s: BitopSpace) -> dict[str, bool]:
    return {
        "pairwise_T1": is_pairwise_t1(s)[0],
        "pairwise_regular": is_pairwise_regular(s)[0],
        "pairwise_T3": is_pairwise_t3(s)[0],
        "pairwise_Hausdorff": is_pairwise_hausdorff(s)[0],
        "pairwise_locally_compact": is_pairwise_locally_compact(s),
        "pairwise_P_space": is_pairwise_p_space(s),
    }
