"""Finite topologies stored as minimal open neighbourhoods.

A topology on points ``0..n-1`` is determined by the smallest open set
around each point (its specialization preorder). Point sets are plain ints
used as bit vectors; ``mask``/``members`` convert to and from iterables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from btdslab import kernels
from btdslab.errors import CapExceeded, StrictNotATopology

PointSet = int

DEFAULT_OPEN_CAP = 6
DEFAULT_TOPOLOGY_CAP = 4


def mask(points: Iterable[int]) -> PointSet:
    out = 0
    for p in points:
        out |= 1 << p
    return out


def members(a: PointSet) -> list[int]:
    out = []
    p = 0
    while a:
        if a & 1:
            out.append(p)
        a >>= 1
        p += 1
    return out


def full_set(n: int) -> PointSet:
    return (1 << n) - 1


def cover_order(cover_members: tuple[PointSet, ...]) -> tuple:
    """Canonical cover order: fewer members first, then member encodings ascending."""
    return (len(cover_members), cover_members)


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    min_nbhd: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.min_nbhd) != self.n:
            raise ValueError("min_nbhd must list one neighbourhood per point")
        full = full_set(self.n)
        for p, m in enumerate(self.min_nbhd):
            if m & ~full or not (m >> p) & 1:
                raise ValueError(f"point {p}: neighbourhood {m:#b} not a valid superset of {{p}}")
            for q in members(m):
                if self.min_nbhd[q] & ~m:
                    raise ValueError(f"neighbourhoods of {p} and {q} violate transitivity")

    @classmethod
    def discrete(cls, n: int) -> FiniteTopology:
        return cls(n, tuple(1 << p for p in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> FiniteTopology:
        return cls(n, (full_set(n),) * n)

    @property
    def full(self) -> PointSet:
        return full_set(self.n)

    def is_open(self, u: PointSet) -> bool:
        return kernels.is_open(self.min_nbhd, u)

    def is_closed(self, a: PointSet) -> bool:
        return self.is_open(self.full & ~a)

    def closure(self, a: PointSet) -> PointSet:
        return kernels.closure(self.min_nbhd, a)

    def open_hull(self, a: PointSet) -> PointSet:
        """Smallest open set containing ``a``."""
        out = 0
        for p in members(a):
            out |= self.min_nbhd[p]
        return out

    @cached_property
    def opens(self) -> tuple[PointSet, ...]:
        return tuple(kernels.enumerate_opens(self.min_nbhd))

    @cached_property
    def closeds(self) -> tuple[PointSet, ...]:
        return tuple(sorted(self.full & ~u for u in self.opens))

    @cached_property
    def irredundant_covers(self) -> tuple[Cover, ...]:
        nonempty = [u for u in self.opens if u]
        found = sorted(kernels.irredundant_covers(nonempty, self.full), key=cover_order)
        return tuple(Cover(members_, 0) for members_ in found)

    def is_discrete(self) -> bool:
        return all(m == 1 << p for p, m in enumerate(self.min_nbhd))

    def is_indiscrete(self) -> bool:
        return all(m == self.full for m in self.min_nbhd)

    def describe(self) -> list[list[int]]:
        return [members(u) for u in self.opens]


@dataclass(frozen=True)
class Cover:
    """A finite family of open sets; ``topology_index`` is 0 when unattached."""

    members: tuple[PointSet, ...]
    topology_index: int = 0

    @property
    def union(self) -> PointSet:
        out = 0
        for m in self.members:
            out |= m
        return out

    def with_index(self, i: int) -> Cover:
        return Cover(self.members, i)


def from_open_family(n: int, family: Iterable[PointSet], strict: bool = False) -> FiniteTopology:
    """Topology generated by ``family`` under finite unions and intersections.

    In strict mode the family must already contain the empty and full sets
    and be closed under pairwise union and intersection.
    """
    full = full_set(n)
    fam = set(family)
    for u in fam:
        if u < 0 or u & ~full:
            raise ValueError(f"set {u:#b} is not a subset of {n} points")
    if strict:
        if 0 not in fam or full not in fam:
            raise StrictNotATopology("family must contain the empty set and the full set")
        for a, b in combinations(sorted(fam), 2):
            if a | b not in fam:
                raise StrictNotATopology(f"union of {members(a)} and {members(b)} missing")
            if a & b not in fam:
                raise StrictNotATopology(f"intersection of {members(a)} and {members(b)} missing")
    mn = []
    for p in range(n):
        m = full
        for u in fam:
            if (u >> p) & 1:
                m &= u
        mn.append(m)
    return FiniteTopology(n, tuple(mn))


def closure(t: FiniteTopology, a: PointSet) -> PointSet:
    return t.closure(a)


def enumerate_opens(t: FiniteTopology, cap: int = DEFAULT_OPEN_CAP) -> list[PointSet]:
    if t.n > cap:
        raise CapExceeded(f"{t.n} points exceeds the open-enumeration cap {cap}")
    return list(t.opens)


def enumerate_irredundant_covers(t: FiniteTopology, cap: int = DEFAULT_OPEN_CAP) -> list[Cover]:
    if t.n > cap:
        raise CapExceeded(f"{t.n} points exceeds the cover-enumeration cap {cap}")
    return list(t.irredundant_covers)


def enumerate_all_covers(t: FiniteTopology, cap: int = 4) -> list[Cover]:
    """Every family of distinct nonempty opens whose union is the full set (brute force)."""
    if t.n > cap:
        raise CapExceeded(f"{t.n} points exceeds the all-covers cap {cap}")
    nonempty = [u for u in t.opens if u]
    out = []
    for r in range(1, len(nonempty) + 1):
        for fam in combinations(nonempty, r):
            c = Cover(fam)
            if c.union == t.full:
                out.append(c)
    return sorted(out, key=lambda c: cover_order(c.members))


def is_irredundant(cover: Cover, full: PointSet) -> bool:
    if cover.union != full:
        return False
    for i in range(len(cover.members)):
        rest = 0
        for j, m in enumerate(cover.members):
            if j != i:
                rest |= m
        if rest == full:
            return False
    return True


def enumerate_topologies(n: int, cap: int = DEFAULT_TOPOLOGY_CAP) -> Iterator[FiniteTopology]:
    """Every topology on ``n`` labelled points, via reflexive transitive relations.

    Yielded in ascending order of the ``min_nbhd`` tuple.
    """
    if n > cap:
        raise CapExceeded(f"{n} points exceeds the topology-enumeration cap {cap}")
    found = []
    # choose, for each point, which other points lie in its minimal neighbourhood
    others = [[q for q in range(n) if q != p] for p in range(n)]
    for picks in product(*[range(1 << (n - 1))] * n):
        mn = []
        for p in range(n):
            m = 1 << p
            for bit, q in enumerate(others[p]):
                if (picks[p] >> bit) & 1:
                    m |= 1 << q
            mn.append(m)
        if all(mn[q] & ~mn[p] == 0 for p in range(n) for q in members(mn[p])):
            found.append(tuple(mn))
    for mn in sorted(found):
        yield FiniteTopology(n, mn)


def topologies_by_family_filter(n: int) -> list[frozenset[PointSet]]:
    """Brute-force oracle: every family of subsets closed under union and intersection.

    Independent of the neighbourhood representation; returns open families.
    """
    full = full_set(n)
    middle = [u for u in range(1, full)]
    out = []
    for bits in range(1 << len(middle)):
        fam = {0, full} | {u for i, u in enumerate(middle) if (bits >> i) & 1}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            out.append(frozenset(fam))
    return out


def brute_closure(t: FiniteTopology, a: PointSet) -> PointSet:
    """Intersection of all closed supersets (oracle for ``closure``)."""
    out = t.full
    for c in t.closeds:
        if a & ~c == 0:
            out &= c
    return out


def topology_key(t: FiniteTopology) -> tuple[int, ...]:
    return t.min_nbhd


def relabel(t: FiniteTopology, perm: Sequence[int]) -> FiniteTopology:
    """Image of ``t`` under the bijection ``p -> perm[p]``."""
    mn = [0] * t.n
    for p, m in enumerate(t.min_nbhd):
        mn[perm[p]] = mask(perm[q] for q in members(m))
    return FiniteTopology(t.n, tuple(mn))
