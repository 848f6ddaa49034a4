"""Point maps, pairwise continuity, composition and orbits."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Literal

from btdslab import kernels
from btdslab.bitop import BitopSpace
from btdslab.errors import (
    InternalEquivalenceViolation,
    NotInvertible,
    NotPairwiseContinuous,
    ShapeMismatch,
)
from btdslab.fintop import FiniteTopology, PointSet


@dataclass(frozen=True)
class PointMap:
    dom_n: int
    cod_n: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.dom_n:
            raise ShapeMismatch(f"table has {len(self.table)} entries for {self.dom_n} points")
        if any(not 0 <= v < self.cod_n for v in self.table):
            raise ShapeMismatch("table value outside the codomain")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def identity(cls, n: int) -> PointMap:
        return cls(n, n, tuple(range(n)))

    @classmethod
    def constant(cls, dom_n: int, cod_n: int, value: int) -> PointMap:
        return cls(dom_n, cod_n, (value,) * dom_n)

    def image(self, a: PointSet) -> PointSet:
        return kernels.image(self.table, a)

    def preimage(self, b: PointSet) -> PointSet:
        return kernels.preimage(self.table, b)

    def is_bijective(self) -> bool:
        return self.dom_n == self.cod_n and len(set(self.table)) == self.dom_n

    def inverse(self) -> PointMap:
        if not self.is_bijective():
            raise NotInvertible("map is not a bijection")
        inv = [0] * self.dom_n
        for x, y in enumerate(self.table):
            inv[y] = x
        return PointMap(self.cod_n, self.dom_n, tuple(inv))


def is_continuous(
    t_src: FiniteTopology, t_dst: FiniteTopology, m: PointMap
) -> tuple[bool, PointSet | None]:
    """Preimage test, cross-checked against neighbourhood monotonicity.

    The witness is the first open set of ``t_dst`` (ascending order) whose
    preimage is not open.
    """
    if t_src.n != m.dom_n or t_dst.n != m.cod_n:
        raise ShapeMismatch("map does not match the topologies' point counts")
    bad = kernels.continuity_witness(t_src.min_nbhd, t_dst.opens, m.table)
    mono = kernels.monotone_ok(t_src.min_nbhd, t_dst.min_nbhd, m.table)
    if (bad == -1) != mono:
        raise InternalEquivalenceViolation("preimage and neighbourhood continuity tests disagree")
    return (True, None) if bad == -1 else (False, bad)


def is_pairwise_continuous(
    src: BitopSpace, dst: BitopSpace, m: PointMap
) -> tuple[bool, tuple[int, PointSet] | None]:
    for i in (1, 2):
        ok, w = is_continuous(src.topology(i), dst.topology(i), m)
        if not ok:
            return False, (i, w)
    return True, None


def is_pairwise_homeomorphism(space: BitopSpace, m: PointMap) -> bool:
    if m.dom_n != space.n or not m.is_bijective():
        return False
    return (
        is_pairwise_continuous(space, space, m)[0]
        and is_pairwise_continuous(space, space, m.inverse())[0]
    )


def compose(outer: PointMap, inner: PointMap) -> PointMap:
    if inner.cod_n != outer.dom_n:
        raise ShapeMismatch(f"cannot compose: inner lands in {inner.cod_n} points, outer takes {outer.dom_n}")
    return PointMap(inner.dom_n, outer.cod_n, tuple(outer.table[v] for v in inner.table))


def all_maps(dom_n: int, cod_n: int) -> Iterator[PointMap]:
    for table in product(range(cod_n), repeat=dom_n):
        yield PointMap(dom_n, cod_n, table)


def pairwise_continuous_maps(src: BitopSpace, dst: BitopSpace) -> list[PointMap]:
    return [m for m in all_maps(src.n, dst.n) if is_pairwise_continuous(src, dst, m)[0]]


@dataclass(frozen=True)
class Btds:
    space: BitopSpace
    map: PointMap
    certified: bool = field(default=False)

    def __post_init__(self) -> None:
        if self.map.dom_n != self.space.n or self.map.cod_n != self.space.n:
            raise ShapeMismatch("a dynamical system needs a self-map of its space")

    @classmethod
    def build(cls, space: BitopSpace, m: PointMap) -> Btds:
        ok, w = is_pairwise_continuous(space, space, m)
        if not ok:
            raise NotPairwiseContinuous(f"map fails continuity in topology {w[0]} at open {w[1]:#b}")
        return cls(space, m, True)

    @classmethod
    def unchecked(cls, space: BitopSpace, m: PointMap) -> Btds:
        """Load without enforcing continuity; ``certified`` records the actual verdict."""
        return cls(space, m, is_pairwise_continuous(space, space, m)[0])


@dataclass(frozen=True)
class Orbit:
    points: tuple[int, ...]
    preperiod: int
    period: int | None  # None when the budget ran out before a repeat

    @property
    def cycle(self) -> tuple[int, ...]:
        return self.points[self.preperiod :] if self.period else ()


def _iterate(step: PointMap, x: int, budget: int) -> Orbit:
    seen: dict[int, int] = {}
    pts: list[int] = []
    cur = x
    while cur not in seen:
        if len(pts) >= budget:
            return Orbit(tuple(pts), len(pts), None)
        seen[cur] = len(pts)
        pts.append(cur)
        cur = step(cur)
    start = seen[cur]
    return Orbit(tuple(pts), start, len(pts) - start)


def orbit(
    b: Btds,
    x: int,
    kind: Literal["forward", "backward", "full"] = "forward",
    budget: int = 10_000,
) -> Orbit:
    if not 0 <= x < b.space.n:
        raise ShapeMismatch(f"point {x} not in the space")
    if kind == "forward":
        return _iterate(b.map, x, budget)
    if not is_pairwise_homeomorphism(b.space, b.map):
        raise NotInvertible("backward and full orbits need a pairwise homeomorphism")
    back = _iterate(b.map.inverse(), x, budget)
    if kind == "backward":
        return back
    if kind == "full":
        fwd = _iterate(b.map, x, budget)
        extra = tuple(p for p in back.points if p not in fwd.points)
        return Orbit(fwd.points + extra, fwd.preperiod, fwd.period)
    raise ValueError(f"unknown orbit kind {kind!r}")
