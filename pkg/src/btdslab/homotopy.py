"""Finite interval models and homotopy verification/search.

A homotopy is a table ``H[x][t]`` over ``X x T`` where ``T`` is an interval
model: a finite space receiving a continuous quotient from ``[0, 1]``. A
table that is pairwise continuous on the model induces a genuine homotopy on
``X x [0, 1]``; failing to find one at a given subdivision proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

from btdslab.bitop import BitopSpace
from btdslab.dynamics import (
    PointMap,
    compose,
    is_pairwise_continuous,
    is_pairwise_homeomorphism,
)
from btdslab.errors import CapExceeded, SearchTimeout, ShapeMismatch
from btdslab.fintop import FiniteTopology

PRODUCT_CAP = 64
DEFAULT_K_CAP = 3


@dataclass(frozen=True)
class IntervalModel:
    space: BitopSpace
    e0: int
    e1: int
    interior: tuple[int, ...]
    reversal: PointMap
    k: int

    @property
    def n(self) -> int:
        return self.space.n


@lru_cache(maxsize=None)
def standard_interval(k: int) -> IntervalModel:
    """``2k+1`` points ``c0, o1, c1, ..., ok, ck`` along the line.

    Closed points sit at even indices, open points at odd ones; a closed
    point's minimal neighbourhood includes its adjacent open points.
    """
    if k < 1:
        raise ValueError("subdivision count must be at least 1")
    n = 2 * k + 1
    mn = []
    for p in range(n):
        if p % 2:
            mn.append(1 << p)
        else:
            m = 1 << p
            if p > 0:
                m |= 1 << (p - 1)
            if p < n - 1:
                m |= 1 << (p + 1)
            mn.append(m)
    t = FiniteTopology(n, tuple(mn))
    rev = PointMap(n, n, tuple(n - 1 - p for p in range(n)))
    return IntervalModel(BitopSpace(t, t), 0, n - 1, tuple(range(1, n - 1)), rev, k)


def check_interval_model(T: IntervalModel) -> list[str]:
    """Names of violated interval-model invariants (empty when valid)."""
    bad = []
    rev = T.reversal
    if not is_pairwise_homeomorphism(T.space, rev):
        bad.append("reversal is not a pairwise homeomorphism")
    if rev(T.e0) != T.e1 or compose(rev, rev) != PointMap.identity(T.n):
        bad.append("reversal must swap the endpoints and be an involution")
    if T.space.t1 != T.space.t2:
        bad.append("both topologies must coincide")
    for e in (T.e0, T.e1):
        if not T.space.t1.is_closed(1 << e):
            bad.append(f"endpoint {e} is not a closed point")
    return bad


def interval_quotient(k_fine: int, k_coarse: int) -> PointMap:
    """Collapse ``standard_interval(k_fine)`` onto ``standard_interval(k_coarse)``."""
    if k_fine % k_coarse:
        raise ShapeMismatch("fine subdivision must be a multiple of the coarse one")
    r = k_fine // k_coarse
    table = []
    for p in range(2 * k_fine + 1):
        if p % 2 == 0:
            i = p // 2
            table.append(2 * (i // r) if i % r == 0 else 2 * (i // r) + 1)
        else:
            j = (p + 1) // 2
            table.append(2 * ((j - 1) // r) + 1)
    return PointMap(2 * k_fine + 1, 2 * k_coarse + 1, tuple(table))


@dataclass(frozen=True)
class ProductSpace:
    left: BitopSpace
    right: BitopSpace
    space: BitopSpace

    def index(self, a: int, b: int) -> int:
        return a * self.right.n + b

    def coords(self, p: int) -> tuple[int, int]:
        return divmod(p, self.right.n)


def _product_topology(a: FiniteTopology, b: FiniteTopology) -> FiniteTopology:
    mn = []
    for x in range(a.n):
        for y in range(b.n):
            m = 0
            for p in range(a.n):
                if (a.min_nbhd[x] >> p) & 1:
                    m |= b.min_nbhd[y] << (p * b.n)
            mn.append(m)
    return FiniteTopology(a.n * b.n, tuple(mn))


@lru_cache(maxsize=4096)
def product(left: BitopSpace, right: BitopSpace, cap: int = PRODUCT_CAP) -> ProductSpace:
    if left.n * right.n > cap:
        raise CapExceeded(f"product of {left.n} and {right.n} points exceeds cap {cap}")
    space = BitopSpace(
        _product_topology(left.t1, right.t1), _product_topology(left.t2, right.t2)
    )
    return ProductSpace(left, right, space)


@dataclass(frozen=True)
class Homotopy:
    X: BitopSpace
    Y: BitopSpace
    T: IntervalModel
    F: PointMap
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.X.n or any(len(r) != self.T.n for r in self.table):
            raise ShapeMismatch("homotopy table must have one row per point, one column per time")
        if self.F.dom_n != self.X.n or self.F.cod_n != self.Y.n:
            raise ShapeMismatch("bridging map does not go from X to Y")
        if any(not 0 <= v < self.Y.n for r in self.table for v in r):
            raise ShapeMismatch("homotopy value outside Y")

    def __call__(self, x: int, t: int) -> int:
        return self.table[x][t]

    def column(self, t: int) -> tuple[int, ...]:
        return tuple(r[t] for r in self.table)

    def as_map(self) -> PointMap:
        return PointMap(self.X.n * self.T.n, self.Y.n, tuple(v for r in self.table for v in r))

    @classmethod
    def constant_in_time(cls, X, Y, T, F, values: Sequence[int]) -> Homotopy:
        return cls(X, Y, T, F, tuple((v,) * T.n for v in values))


@dataclass(frozen=True)
class BitopPath:
    T: IntervalModel
    Y: BitopSpace
    map: PointMap
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.map.dom_n != self.T.n or self.map.cod_n != self.Y.n:
            raise ShapeMismatch("path must map the interval model into Y")
        if self.map(self.T.e0) != self.start or self.map(self.T.e1) != self.end:
            raise ValueError("path endpoints do not match")
        if not is_pairwise_continuous(self.T.space, self.Y, self.map)[0]:
            raise ValueError("path is not pairwise continuous")


@dataclass(frozen=True)
class HomotopyVerdict:
    ok: bool
    boundary_witness: tuple | None = None
    continuity_witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def continuity_of(H: Homotopy) -> tuple[bool, tuple[int, int] | None]:
    P = product(H.X, H.T.space)
    return is_pairwise_continuous(P.space, H.Y, H.as_map())


def verify_between(H: Homotopy, start: PointMap, end: PointMap) -> HomotopyVerdict:
    """``H(., e0) = start`` and ``H(., e1) = end`` plus pairwise continuity."""
    if start.dom_n != H.X.n or end.dom_n != H.X.n:
        raise ShapeMismatch("boundary maps must be defined on X")
    bw = None
    for x in range(H.X.n):
        for t, want in ((H.T.e0, start(x)), (H.T.e1, end(x))):
            if H(x, t) != want:
                bw = (x, t, want, H(x, t))
                break
        if bw:
            break
    ok, cw = continuity_of(H)
    return HomotopyVerdict(bw is None and ok, bw, cw)


def verify_btds_homotopy(H: Homotopy, f: PointMap, g: PointMap) -> HomotopyVerdict:
    return verify_between(H, compose(H.F, f), compose(g, H.F))


def verify_iteration_between(
    H: Homotopy, f: PointMap, start: PointMap, end: PointMap, x0: int, budget: int = 10_000
) -> HomotopyVerdict:
    """``H(x_{n+1}, e0) = start(x_n)`` and ``H(x_{n+1}, e1) = end(x_n)`` along the f-orbit of ``x0``."""
    bw = None
    seen = set()
    x = x0
    for _ in range(budget):
        if x in seen:
            break
        seen.add(x)
        nxt = f(x)
        for t, want in ((H.T.e0, start(x)), (H.T.e1, end(x))):
            if H(nxt, t) != want:
                bw = (nxt, t, want, H(nxt, t))
                break
        if bw:
            break
        x = nxt
    ok, cw = continuity_of(H)
    return HomotopyVerdict(bw is None and ok, bw, cw)


def verify_iteration_homotopy(
    H: Homotopy, f: PointMap, g: PointMap, x0: int, budget: int = 10_000
) -> HomotopyVerdict:
    """Boundary conditions only along the orbit ``x_{n+1} = f(x_n)`` of ``x0``."""
    return verify_iteration_between(H, f, compose(H.F, f), compose(g, H.F), x0, budget)


def iteration_anchor_points(f: PointMap, x0: int, budget: int = 10_000) -> list[int]:
    """Distinct orbit points ``x_1, x_2, ...`` in order of appearance."""
    out: list[int] = []
    x = x0
    for _ in range(budget):
        nxt = f(x)
        if nxt in out:
            break
        out.append(nxt)
        x = nxt
    return out


def verify_path_between(
    H: Homotopy, dom: IntervalModel, start: PointMap, end: PointMap, x: int, y: int
) -> HomotopyVerdict:
    """Endpoint rows constant at ``x`` and ``y``; interior rows run from ``start`` to ``end``."""
    if H.X != dom.space:
        raise ShapeMismatch("path homotopy domain must be the interval model")
    bw = None
    for t in range(H.T.n):
        for m, want in ((dom.e0, x), (dom.e1, y)):
            if H(m, t) != want:
                bw = (m, t, want, H(m, t))
                break
        if bw:
            break
    if bw is None:
        for m in dom.interior:
            for t, want in ((H.T.e0, start(m)), (H.T.e1, end(m))):
                if H(m, t) != want:
                    bw = (m, t, want, H(m, t))
                    break
            if bw:
                break
    ok, cw = continuity_of(H)
    return HomotopyVerdict(bw is None and ok, bw, cw)


def verify_path_homotopy(
    H: Homotopy, dom: IntervalModel, f: PointMap, g: PointMap, x: int, y: int
) -> HomotopyVerdict:
    """Path homotopy over ``dom x T``.

    Endpoint rows are pinned to ``x`` and ``y`` at every time; the start and
    end conditions apply to interior rows only.
    """
    if H.X != dom.space:
        raise ShapeMismatch("path homotopy domain must be the interval model")
    if H.F(dom.e0) != x or H.F(dom.e1) != y:
        return HomotopyVerdict(False, ("path", H.F(dom.e0), H.F(dom.e1)), None)
    return verify_path_between(H, dom, compose(H.F, f), compose(g, H.F), x, y)


def reverse(H: Homotopy) -> Homotopy:
    rev = H.T.reversal
    return Homotopy(H.X, H.Y, H.T, H.F, tuple(tuple(r[rev(t)] for t in range(H.T.n)) for r in H.table))


def refine(H: Homotopy, k_new: int) -> Homotopy:
    """Re-embed on a finer model by composing with the interval quotient."""
    q = interval_quotient(k_new, H.T.k)
    T = standard_interval(k_new)
    return Homotopy(H.X, H.Y, T, H.F, tuple(tuple(r[q(t)] for t in range(T.n)) for r in H.table))


def concatenate(first: Homotopy, second: Homotopy, F: PointMap | None = None) -> Homotopy:
    """Run ``first`` then ``second`` on a model with twice the subdivisions."""
    if first.T.k != second.T.k or first.X != second.X or first.Y != second.Y:
        raise ShapeMismatch("concatenated homotopies must share X, Y and the interval model")
    if first.column(first.T.e1) != second.column(second.T.e0):
        raise ShapeMismatch("end of the first homotopy must equal the start of the second")
    T = standard_interval(2 * first.T.k)
    rows = tuple(a + b[1:] for a, b in zip(first.table, second.table))
    return Homotopy(first.X, first.Y, T, F if F is not None else first.F, rows)


def postcompose(G: PointMap, H: Homotopy, Z: BitopSpace) -> Homotopy:
    return Homotopy(H.X, Z, H.T, compose(G, H.F), tuple(tuple(G(v) for v in r) for r in H.table))


def precompose(H: Homotopy, F: PointMap, X: BitopSpace, bridge: PointMap) -> Homotopy:
    """``(x, t) -> H(F(x), t)`` with the supplied bridging map."""
    return Homotopy(X, H.Y, H.T, bridge, tuple(H.table[F(x)] for x in range(X.n)))


@dataclass(frozen=True)
class SearchResult:
    status: Literal["found", "not_found"]
    homotopy: Homotopy | None
    k: int
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def _pins(X, T, f, g, F, mode, endpoints, dom, x0=None) -> dict[tuple[int, int], int] | None:
    pins: dict[tuple[int, int], int] = {}

    def pin(cell, v) -> bool:
        if pins.setdefault(cell, v) != v:
            return False
        return True

    ff, gf = compose(F, f), compose(g, F)
    if mode == "iteration":
        seen = set()
        x = x0
        while x not in seen:
            seen.add(x)
            nxt = f(x)
            if not (pin((nxt, T.e0), ff(x)) and pin((nxt, T.e1), gf(x))):
                return None
            x = nxt
        return pins
    if mode == "btds":
        rows = range(X.n)
    else:
        rows = dom.interior
        x, y = endpoints
        for t in range(T.n):
            if not (pin((dom.e0, t), x) and pin((dom.e1, t), y)):
                return None
    for r in rows:
        if not (pin((r, T.e0), ff(r)) and pin((r, T.e1), gf(r))):
            return None
    return pins


def search_homotopy(
    X: BitopSpace,
    Y: BitopSpace,
    T: IntervalModel,
    f: PointMap,
    g: PointMap,
    F: PointMap,
    mode: Literal["btds", "path", "iteration"] = "btds",
    endpoints: tuple[int, int] | None = None,
    dom: IntervalModel | None = None,
    budget: int = 1_000_000,
    x0: int | None = None,
) -> SearchResult:
    """Lexicographically smallest verified table, by backtracking with pinned boundary cells.

    Cells are filled in row-major order with values ascending, so the first
    table found is the canonical minimum among all valid ones.
    """
    if mode == "path":
        if dom is None or endpoints is None:
            raise ValueError("path mode needs the domain interval model and endpoints")
        X = dom.space
    if mode == "iteration" and x0 is None:
        raise ValueError("iteration mode needs a starting point x0")
    pins = _pins(X, T, f, g, F, mode, endpoints, dom, x0)
    if pins is None:
        return SearchResult("not_found", None, T.k, 0)
    P = product(X, T.space)
    N = P.space.n
    mnY = (Y.t1.min_nbhd, Y.t2.min_nbhd)
    mnP = (P.space.t1.min_nbhd, P.space.t2.min_nbhd)
    # constraint (p, q, i): H(q) must lie in the i-neighbourhood of H(p)
    cons: list[list[tuple[int, int, int]]] = [[] for _ in range(N)]
    for i in (0, 1):
        for p in range(N):
            m = mnP[i][p]
            for q in range(N):
                if q != p and (m >> q) & 1:
                    later = max(p, q)
                    cons[later].append((p, q, i))
    values = [-1] * N
    order = []
    for p in range(N):
        cell = P.coords(p)
        if cell in pins:
            values[p] = pins[cell]
        else:
            order.append(p)
    fixed = set(range(N)) - set(order)
    # constraints are checked once both ends are known: attach to the later free cell
    attached: dict[int, list[tuple[int, int, int]]] = {p: [] for p in order}
    static: list[tuple[int, int, int]] = []
    for p in range(N):
        for c in cons[p]:
            a, b, _ = c
            free = [z for z in (a, b) if z not in fixed]
            if not free:
                static.append(c)
            else:
                attached[max(free)].append(c)
    nodes = 0

    def holds(c) -> bool:
        p, q, i = c
        return (mnY[i][values[p]] >> values[q]) & 1 == 1

    if not all(holds(c) for c in static):
        return SearchResult("not_found", None, T.k, 0)

    def rec(idx: int) -> bool:
        nonlocal nodes
        if idx == len(order):
            return True
        p = order[idx]
        for v in range(Y.n):
            nodes += 1
            if nodes > budget:
                raise SearchTimeout(f"homotopy search exceeded {budget} nodes at k={T.k}")
            values[p] = v
            if all(holds(c) for c in attached[p]) and rec(idx + 1):
                return True
        values[p] = -1
        return False

    if not rec(0):
        return SearchResult("not_found", None, T.k, nodes)
    table = tuple(tuple(values[P.index(x, t)] for t in range(T.n)) for x in range(X.n))
    H = Homotopy(X, Y, T, F, table)
    if mode == "btds":
        verdict = verify_btds_homotopy(H, f, g)
    elif mode == "iteration":
        verdict = verify_iteration_homotopy(H, f, g, x0)
    else:
        verdict = verify_path_homotopy(H, dom, f, g, *endpoints)
    assert verdict.ok, "search produced a table that fails verification"
    return SearchResult("found", H, T.k, nodes)


def search_with_escalation(
    X, Y, f, g, F, k_cap: int = DEFAULT_K_CAP, **kwargs
) -> SearchResult:
    """Try ``k = 1, 2, ...`` up to ``k_cap``; report the level reached."""
    last = None
    for k in range(1, k_cap + 1):
        last = search_homotopy(X, Y, standard_interval(k), f, g, F, **kwargs)
        if last.found:
            return last
    return last
