"""Evaluate the claims of an instance document."""

from __future__ import annotations

from typing import Any

from btdslab.bitop import axiom_vector, is_pairwise_hausdorff, is_pairwise_regular, is_pairwise_t1, is_pairwise_t3
from btdslab.contexts import h_context, hi_context
from btdslab.dynamics import compose, is_continuous, is_pairwise_continuous
from btdslab.errors import ParseError
from btdslab.fintop import members
from btdslab.homotopy import continuity_of, search_with_escalation, verify_btds_homotopy
from btdslab.lab.instance import InstanceDoc, LabelledSpace, NamedHomotopy
from btdslab.selection import CLASSICAL_PROPERTIES, classical_vector, decide_h_property

AXIOM_WITNESSES = {
    "pairwise_T1": is_pairwise_t1,
    "pairwise_regular": is_pairwise_regular,
    "pairwise_T3": is_pairwise_t3,
    "pairwise_Hausdorff": is_pairwise_hausdorff,
}


def _product_labels(doc: InstanceDoc, nh: NamedHomotopy, a: int) -> list[str]:
    dom = doc.spaces[nh.domain]
    tn = nh.homotopy.T.n
    return [f"({dom.labels[p // tn]},t{p % tn})" for p in members(a)]


def _table(space_from: LabelledSpace, space_to: LabelledSpace, table: tuple[int, ...]) -> dict[str, str]:
    return {space_from.labels[x]: space_to.labels[v] for x, v in enumerate(table)}


def _map_continuity(doc: InstanceDoc, name: str, which: tuple[int, ...]) -> tuple[bool, Any]:
    nm = doc.maps[name]
    src, dst = doc.spaces[nm.domain], doc.spaces[nm.codomain]
    for i in which:
        ok, w = is_continuous(src.space.topology(i), dst.space.topology(i), nm.map)
        if not ok:
            return False, {"topology": i, "open": dst.fmt(w), "preimage": src.fmt(nm.map.preimage(w))}
    return True, None


def evaluate_claim(doc: InstanceDoc, c: dict) -> dict:
    check = c["check"]
    witness: Any = None
    if check == "pairwise_continuous":
        verdict, witness = _map_continuity(doc, c["map"], (1, 2))
    elif check == "continuous":
        verdict, witness = _map_continuity(doc, c["map"], (c["topology"],))
    elif check == "composition":
        outer, inner = doc.maps[c["outer"]], doc.maps[c["inner"]]
        m = compose(outer.map, inner.map)
        verdict = _table(doc.spaces[inner.domain], doc.spaces[outer.codomain], m.table)
        ok, w = is_pairwise_continuous(doc.spaces[inner.domain].space, doc.spaces[outer.codomain].space, m)
        witness = {"pairwise_continuous": ok}
    elif check in ("homotopy_boundary", "homotopy_continuous", "btds_homotopy"):
        nh = doc.homotopies[c["homotopy"]]
        H = nh.homotopy
        witness = {}
        verdict = True
        if check != "homotopy_continuous":
            f, g = doc.maps[c["f"]].map, doc.maps[c["g"]].map
            v = verify_btds_homotopy(H, f, g)
            if v.boundary_witness is not None:
                x, t, want, got = v.boundary_witness
                Y = doc.spaces[nh.codomain]
                witness["boundary"] = {
                    "point": doc.spaces[nh.domain].labels[x],
                    "time": "e0" if t == H.T.e0 else "e1",
                    "expected": Y.labels[want],
                    "actual": Y.labels[got],
                }
                verdict = False
        if check != "homotopy_boundary":
            ok, w = continuity_of(H)
            if not ok:
                i, u = w
                witness["continuity"] = {
                    "topology": i,
                    "open": doc.spaces[nh.codomain].fmt(u),
                    "preimage": _product_labels(doc, nh, H.as_map().preimage(u)),
                }
                verdict = False
        witness = witness or None
    elif check == "homotopy_search":
        f, g, F = doc.maps[c["f"]], doc.maps[c["g"]], doc.maps[c["bridge"]]
        X, Y = doc.spaces[F.domain], doc.spaces[F.codomain]
        k_cap = int(c.get("k_cap", 3))
        res = search_with_escalation(X.space, Y.space, f.map, g.map, F.map, k_cap=k_cap, budget=int(c.get("budget", 1_000_000)))
        verdict = res.found
        witness = {"k": res.k, "nodes": res.nodes}
        if res.found:
            witness["table"] = {
                X.labels[x]: [Y.labels[v] for v in row] for x, row in enumerate(res.homotopy.table)
            }
    elif check == "axiom":
        S = doc.spaces[c["space"]]
        name = c["name"]
        vec = axiom_vector(S.space)
        if name not in vec:
            raise ParseError(f"claim {c['id']}: unknown axiom {name!r}")
        verdict = vec[name]
        if name in AXIOM_WITNESSES and not verdict:
            _, w = AXIOM_WITNESSES[name](S.space)
            witness = w if not isinstance(w, tuple) or not all(isinstance(v, int) for v in w) else [S.labels[p] for p in w]
    elif check == "selection":
        S = doc.spaces[c["space"]]
        prop = c["property"]
        if prop in CLASSICAL_PROPERTIES:
            rep = classical_vector(S.space)[prop]
        else:
            nh = doc.homotopies[c["homotopy"]]
            f, g = doc.maps[c["f"]].map, doc.maps[c["g"]].map
            if "orbit_of" in c:
                x0 = doc.spaces[nh.domain].index(c["orbit_of"])
                ctx = hi_context(nh.homotopy, f, g, x0, nh.name)
            else:
                ctx = h_context(nh.homotopy, f, g, nh.name)
            rep = decide_h_property(S.space, prop, ctx, force=bool(c.get("force", False)))
        verdict = rep.verdict
        witness = {"method": rep.method}
        if not rep.verdict:
            witness["refuting_cover"] = [[S.labels[p] for p in m] for m in rep.refuting_cover or []]
            if rep.refuting_anchor is not None:
                witness["anchor"] = S.labels[rep.refuting_anchor]
    else:  # guarded by the loader
        raise ParseError(f"unknown check {check!r}")

    out = {"id": c["id"], "check": check, "verdict": verdict, "witness": witness}
    if "expect" in c:
        expect = c["expect"]
        if isinstance(expect, dict):
            expect = {str(k): str(v) for k, v in expect.items()}
        out["expect"] = expect
        out["status"] = "agree" if expect == verdict else "disagree"
    else:
        out["status"] = "unchecked"
    if "anchor" in c:
        out["anchor"] = c["anchor"]
    return out


def check_instance(doc: InstanceDoc) -> dict:
    results = [evaluate_claim(doc, c) for c in doc.claims]
    counts = {s: sum(r["status"] == s for r in results) for s in ("agree", "disagree", "unchecked")}
    return {
        "instance": doc.name,
        "anchor": doc.anchor,
        "source": doc.source,
        "notes": list(doc.notes),
        "claims": results,
        "summary": counts,
    }
