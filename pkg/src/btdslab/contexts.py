"""Anchor contexts from verified homotopies, and the bundled per-space library."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from btdslab.bitop import BitopSpace
from btdslab.dynamics import PointMap
from btdslab.homotopy import (
    DEFAULT_K_CAP,
    BitopPath,
    Homotopy,
    IntervalModel,
    iteration_anchor_points,
    search_with_escalation,
    standard_interval,
    verify_btds_homotopy,
    verify_iteration_homotopy,
    verify_path_homotopy,
)
from btdslab.selection import Context


def h_context(H: Homotopy, f: PointMap, g: PointMap, name: str = "") -> Context:
    verified = verify_btds_homotopy(H, f, g).ok
    anchors = tuple(sorted({(H(x, H.T.e0), H(x, H.T.e1)) for x in range(H.X.n)}, key=lambda a: (a[1], a[0])))
    return Context("H", anchors, verified, name)


def hi_context(H: Homotopy, f: PointMap, g: PointMap, x0: int, name: str = "") -> Context:
    verified = verify_iteration_homotopy(H, f, g, x0).ok
    pts = iteration_anchor_points(f, x0)
    anchors = tuple(sorted({(H(x, H.T.e0), H(x, H.T.e1)) for x in pts}, key=lambda a: (a[1], a[0])))
    return Context("HI", anchors, verified, name)


def ph_context(
    H: Homotopy, dom: IntervalModel, f: PointMap, g: PointMap, x: int, y: int, name: str = ""
) -> Context:
    verified = verify_path_homotopy(H, dom, f, g, x, y).ok
    anchors = tuple(
        sorted({(H(m, H.T.e0), H(m, H.T.e1)) for m in dom.interior}, key=lambda a: (a[1], a[0]))
    )
    return Context("PH", anchors, verified, name)


@dataclass(frozen=True)
class ContextBundle:
    """One library entry: an H context and a PH context built from the same path."""

    name: str
    h: Context
    ph: Context
    h_homotopy: Homotopy
    ph_homotopy: Homotopy


@lru_cache(maxsize=4096)
def context_library(Y: BitopSpace, k_cap: int = DEFAULT_K_CAP) -> tuple[ContextBundle, ...]:
    """For each ordered pair of points joined by a path at subdivision <= ``k_cap``.

    H part: a one-point domain, identity dynamics there, bridge constant at
    the start point and target dynamics constant at the end point; the
    homotopy is the path found by search. PH part: that same path as a
    bitopological path, identity dynamics on both sides, and the
    time-constant path homotopy.
    """
    X = BitopSpace.point()
    f = PointMap.identity(1)
    out = []
    for y0 in range(Y.n):
        for y1 in range(Y.n):
            F = PointMap.constant(1, Y.n, y0)
            g = PointMap.constant(Y.n, Y.n, y1)
            res = search_with_escalation(X, Y, f, g, F, k_cap=k_cap)
            if not res.found:
                continue
            H = res.homotopy
            name = f"path:{y0}->{y1}"
            dom = standard_interval(H.T.k)
            path = BitopPath(dom, Y, PointMap(dom.n, Y.n, H.table[0]), y0, y1)
            idd, idy = PointMap.identity(dom.n), PointMap.identity(Y.n)
            Hp = Homotopy.constant_in_time(dom.space, Y, standard_interval(1), path.map, path.map.table)
            out.append(
                ContextBundle(
                    name,
                    h_context(H, f, g, name),
                    ph_context(Hp, dom, idd, idy, y0, y1, name),
                    H,
                    Hp,
                )
            )
    return tuple(out)
