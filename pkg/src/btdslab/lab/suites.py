"""Exhaustive and sampled validation suites over small instances.

Each suite returns a ``SuiteResult``; ``status`` is PASS when every checked
case agrees with the statement under test, FINDING when a case contradicts
it (the first such case is the witness), and VACUOUS when no case meets the
statement's hypotheses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from btdslab.bitop import BitopSpace, Verdict, check_regular_hausdorff_inclusion, enumerate_spaces
from btdslab.dynamics import PointMap, compose, is_pairwise_continuous, pairwise_continuous_maps
from btdslab.fintop import (
    enumerate_all_covers,
    enumerate_topologies,
    is_irredundant,
    topologies_by_family_filter,
)
from btdslab.homotopy import (
    Homotopy,
    IntervalModel,
    concatenate,
    postcompose,
    precompose,
    refine,
    reverse,
    search_homotopy,
    search_with_escalation,
    standard_interval,
    verify_between,
    verify_btds_homotopy,
    verify_iteration_between,
    verify_iteration_homotopy,
    verify_path_between,
)
from btdslab.lab.sweep import iter_instances
from btdslab.selection import IMPLICATIONS

PASS, FINDING, VACUOUS = "PASS", "FINDING", "VACUOUS"


@dataclass
class SuiteResult:
    suite: str
    status: str
    checked: int
    witness: object = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "status": self.status,
            "checked": self.checked,
            "witness": self.witness,
            "detail": self.detail,
        }


def _instance_witness(row: dict, ctx: dict, extra: dict) -> dict:
    return {
        "key": row["key"], "n": row["n"], "min_nbhd": row["min_nbhd"],
        "tau1": row["tau1"], "tau2": row["tau2"], "context": ctx["name"], **extra,
    }


# ---------------------------------------------------------------- selection suites


def implication_diagram(rows: list[dict], family: str) -> SuiteResult:
    """Every arrow a => b of the diagram, over every (space, context) instance."""
    checked = 0
    for row, ctx, vals in iter_instances(rows):
        for a, b in IMPLICATIONS:
            checked += 1
            if vals[f"{family}_{a}"] and not vals[f"{family}_{b}"]:
                return SuiteResult(
                    f"implication_diagram_{family}", FINDING, checked,
                    _instance_witness(row, ctx, {"arrow": [a, b]}),
                )
    return SuiteResult(f"implication_diagram_{family}", PASS if checked else VACUOUS, checked)


def equivalence(rows: list[dict], family: str, names: tuple[str, ...], hypotheses: tuple[str, ...], suite: str) -> SuiteResult:
    """All of ``names`` agree on every instance whose space satisfies ``hypotheses``."""
    checked = 0
    for row, ctx, vals in iter_instances(rows):
        if not all(vals[h] for h in hypotheses):
            continue
        checked += 1
        got = {n: vals[f"{family}_{n}"] for n in names}
        if len(set(got.values())) > 1:
            return SuiteResult(suite, FINDING, checked, _instance_witness(row, ctx, {"verdicts": got}))
    return SuiteResult(suite, PASS if checked else VACUOUS, checked)


P_SPACE = ("pairwise_P_space",)
T3_LC = ("pairwise_T3", "pairwise_locally_compact")
T3_LC_P = T3_LC + P_SPACE


def selection_suites(rows: list[dict]) -> list[SuiteResult]:
    out = [implication_diagram(rows, "H"), implication_diagram(rows, "PH")]
    for fam in ("H", "PH"):
        for kind in ("Rothberger", "Menger"):
            out.append(equivalence(rows, fam, (f"almost_{kind}", f"weak_{kind}"), P_SPACE, f"{fam}_almost_weak_{kind}"))
            out.append(equivalence(rows, fam, (kind, f"almost_{kind}"), T3_LC, f"{fam}_plain_almost_{kind}_T3"))
            out.append(
                equivalence(rows, fam, (kind, f"almost_{kind}", f"weak_{kind}"), T3_LC_P, f"{fam}_three_way_{kind}_T3")
            )
            out.append(equivalence(rows, fam, (kind, f"weak_{kind}"), T3_LC_P, f"{fam}_plain_weak_{kind}_T3"))
    return out


# ---------------------------------------------------------------- spaces


def regular_hausdorff_inclusion(max_points: int = 3) -> SuiteResult:
    """Status follows the adopted symmetric Hausdorff reading; the one-sided
    reading is tallied in ``detail`` so a definitional mismatch shows up."""
    counts = {v.value: 0 for v in Verdict}
    one_sided = {v.value: 0 for v in Verdict}
    first_one_sided = None
    for n in range(1, max_points + 1):
        for S in enumerate_spaces(n):
            rep = check_regular_hausdorff_inclusion(S)
            counts[rep.verdict.value] += 1
            one_sided[rep.one_sided_verdict.value] += 1
            if rep.one_sided_verdict is Verdict.VIOLATED and first_one_sided is None:
                first_one_sided = {"min_nbhd": _topo(S), "witness": rep.one_sided_witness}
            if rep.verdict is Verdict.VIOLATED:
                return SuiteResult(
                    "regular_hausdorff_inclusion", FINDING, sum(counts.values()),
                    {"min_nbhd": _topo(S), "witness": rep.witness}, counts,
                )
    detail = {**counts, "one_sided": one_sided, "one_sided_first_violation": first_one_sided}
    status = PASS if counts[Verdict.CONFIRMED.value] else VACUOUS
    return SuiteResult("regular_hausdorff_inclusion", status, sum(counts.values()), None, detail)


def topology_ground_truth(max_points: int = 3) -> SuiteResult:
    counts = {}
    for n in range(1, max_points + 1):
        tops = list(enumerate_topologies(n))
        counts[str(n)] = len(tops)
        if {frozenset(t.opens) for t in tops} != set(topologies_by_family_filter(n)):
            return SuiteResult("topology_ground_truth", FINDING, n, {"n": n}, counts)
        for t in tops:
            brute = [c for c in enumerate_all_covers(t) if is_irredundant(c, t.full)]
            if brute != list(t.irredundant_covers):
                return SuiteResult("topology_ground_truth", FINDING, n, {"n": n, "min_nbhd": list(t.min_nbhd)}, counts)
    return SuiteResult("topology_ground_truth", PASS, max_points, None, counts)


# ---------------------------------------------------------------- maps and homotopies


@lru_cache(maxsize=None)
def _maps(X: BitopSpace, Y: BitopSpace) -> tuple[PointMap, ...]:
    return tuple(pairwise_continuous_maps(X, Y))


def small_spaces(max_points: int) -> list[BitopSpace]:
    return [S for n in range(1, max_points + 1) for S in enumerate_spaces(n)]


def _composition_case(X, Y, f, g, F) -> tuple[str, str] | None:
    if not is_pairwise_continuous(X, Y, compose(F, f))[0]:
        return ("F o f", "not pairwise continuous")
    if not is_pairwise_continuous(X, Y, compose(g, F))[0]:
        return ("g o F", "not pairwise continuous")
    return None


def _topo(S: BitopSpace) -> list[list[int]]:
    return [list(S.t1.min_nbhd), list(S.t2.min_nbhd)]


def _case(X, Y, f, g, F, bad) -> dict:
    return {
        "X": _topo(X),
        "Y": _topo(Y),
        "f": list(f.table), "g": list(g.table), "F": list(F.table), "failed": bad[0],
    }


def composition_exhaustive(max_points: int = 2) -> SuiteResult:
    spaces = small_spaces(max_points)
    checked = 0
    for X in spaces:
        for Y in spaces:
            for F in _maps(X, Y):
                for f in _maps(X, X):
                    for g in _maps(Y, Y):
                        checked += 1
                        bad = _composition_case(X, Y, f, g, F)
                        if bad:
                            return SuiteResult("composition_exhaustive", FINDING, checked, _case(X, Y, f, g, F, bad))
    return SuiteResult("composition_exhaustive", PASS, checked, None, {"max_points": max_points})


def composition_sampled(n: int = 3, samples: int = 10_000, seed: int = 0) -> SuiteResult:
    """Random triples where at least one of X, Y has exactly ``n`` points."""
    rng = random.Random(seed)
    big = list(enumerate_spaces(n))
    pool = small_spaces(n)
    checked = 0
    while checked < samples:
        X = rng.choice(big)
        Y = rng.choice(pool)
        if rng.random() < 0.5:
            X, Y = Y, X
        F = rng.choice(_maps(X, Y))
        f = rng.choice(_maps(X, X))
        g = rng.choice(_maps(Y, Y))
        checked += 1
        bad = _composition_case(X, Y, f, g, F)
        if bad:
            return SuiteResult("composition_sampled", FINDING, checked, _case(X, Y, f, g, F, bad))
    return SuiteResult("composition_sampled", PASS, checked, None, {"n": n, "seed": seed})


def _fail(suite: str, checked: int, what: str, case: dict, detail: dict) -> SuiteResult:
    return SuiteResult(suite, FINDING, checked, {what: case}, detail)


def equivalence_relation_h(max_points: int = 2, k: int = 1, k_cap: int = 3) -> SuiteResult:
    """Reflexivity, symmetry and transitivity of BTDS-homotopy over all small instances.

    Reflexivity: F = identity and the time-constant table ``H(x, t) = f(x)``.
    Symmetry: the reversed table runs from ``g o F`` back to ``F o f``.
    Transitivity: from H (f to g via F) and H2 (g to h via G), the
    concatenation of ``G o H`` and ``H2 o F`` verifies for (f, h, G o F) at
    level ``2k``, and search with escalation also finds a homotopy for that
    triple. Every success must also survive refinement to level ``2k``.
    """
    suite = "equivalence_relation_H"
    spaces = small_spaces(max_points)
    T = standard_interval(k)
    detail = {"reflexive": 0, "symmetric": 0, "refined": 0, "transitive": 0, "transitive_searched": 0}
    for X in spaces:
        idx = PointMap.identity(X.n)
        for f in _maps(X, X):
            detail["reflexive"] += 1
            H = Homotopy.constant_in_time(X, X, T, idx, f.table)
            if not verify_btds_homotopy(H, f, f).ok:
                return _fail(suite, detail["reflexive"], "reflexivity", _case(X, X, f, f, idx, ("identity",)), detail)
    into: dict[tuple, list] = {}
    out_of: dict[tuple, list] = {}
    for X in spaces:
        for Y in spaces:
            for F in _maps(X, Y):
                for f in _maps(X, X):
                    for g in _maps(Y, Y):
                        res = search_homotopy(X, Y, T, f, g, F)
                        if not res.found:
                            continue
                        H = res.homotopy
                        detail["symmetric"] += 1
                        if not verify_between(reverse(H), compose(g, F), compose(F, f)).ok:
                            return _fail(suite, detail["symmetric"], "symmetry", _case(X, Y, f, g, F, ("reverse",)), detail)
                        detail["refined"] += 1
                        if not verify_btds_homotopy(refine(H, 2 * k), f, g).ok:
                            return _fail(suite, detail["refined"], "refinement", _case(X, Y, f, g, F, ("refine",)), detail)
                        into.setdefault((Y, g), []).append((X, f, F, H))
                        out_of.setdefault((X, f), []).append((Y, g, F, H))
    searched: dict[tuple, bool] = {}
    verified: dict[Homotopy, bool] = {}
    for (Y, g), incoming in into.items():
        for Z, h, G, H2 in out_of.get((Y, g), []):
            for X, f, F, H in incoming:
                K = compose(G, F)
                first = postcompose(G, H, Z)
                second = precompose(H2, F, X, K)
                W = concatenate(Homotopy(X, Z, H.T, K, first.table), second, K)
                if W not in verified:
                    verified[W] = verify_btds_homotopy(W, f, h).ok
                detail["transitive"] += 1
                if not verified[W]:
                    return _fail(suite, detail["transitive"], "transitivity", _case(X, Z, f, h, K, ("concatenation",)), detail)
                skey = (X, Z, f, h, K)
                if skey not in searched:
                    searched[skey] = search_with_escalation(X, Z, f, h, K, k_cap=k_cap).found
                    detail["transitive_searched"] += 1
                if not searched[skey]:
                    return _fail(suite, detail["transitive"], "transitivity", _case(X, Z, f, h, K, ("search",)), detail)
    total = detail["reflexive"] + detail["symmetric"] + detail["transitive"]
    return SuiteResult(suite, PASS, total, None, detail)


def _iteration_search(X, Y, f, g, F, x0, k_cap):
    for k in range(1, k_cap + 1):
        res = search_homotopy(X, Y, standard_interval(k), f, g, F, mode="iteration", x0=x0)
        if res.found:
            return res
    return res


def equivalence_relation_ih(max_points: int = 2, k: int = 1, k_cap: int = 3) -> SuiteResult:
    """The same three properties for iteration homotopy, started at each point ``x0``.

    Reflexivity uses F = identity and ``H(x, t) = x``: along the orbit the
    conditions read ``H(x_{n+1}, .) = x_{n+1}``. Transitivity searches for a
    homotopy bridged by ``G o F`` from the same ``x0``.
    """
    suite = "equivalence_relation_IH"
    spaces = small_spaces(max_points)
    T = standard_interval(k)
    detail = {"reflexive": 0, "symmetric": 0, "transitive": 0, "transitive_searched": 0}
    for X in spaces:
        idx = PointMap.identity(X.n)
        H = Homotopy.constant_in_time(X, X, T, idx, idx.table)
        for f in _maps(X, X):
            for x0 in range(X.n):
                detail["reflexive"] += 1
                if not verify_iteration_homotopy(H, f, f, x0).ok:
                    return _fail(suite, detail["reflexive"], "reflexivity", {**_case(X, X, f, f, idx, ("identity",)), "x0": x0}, detail)
    into: dict[tuple, list] = {}
    onward: dict[tuple, set] = {}
    for X in spaces:
        for Y in spaces:
            for F in _maps(X, Y):
                for f in _maps(X, X):
                    for g in _maps(Y, Y):
                        for x0 in range(X.n):
                            res = search_homotopy(X, Y, T, f, g, F, mode="iteration", x0=x0)
                            if not res.found:
                                continue
                            detail["symmetric"] += 1
                            rev = verify_iteration_between(reverse(res.homotopy), f, compose(g, F), compose(F, f), x0)
                            if not rev.ok:
                                return _fail(suite, detail["symmetric"], "symmetry", {**_case(X, Y, f, g, F, ("reverse",)), "x0": x0}, detail)
                            into.setdefault((Y, g), []).append((X, f, F, x0))
                            onward.setdefault((X, f, x0), set()).add((Y, g, F))
    searched: dict[tuple, bool] = {}
    for (Y, g), incoming in into.items():
        for X, f, F, x0 in incoming:
            # the second relation is taken at the image of the starting point
            for Z, h, G in sorted(onward.get((Y, g, F(x0)), ()), key=lambda c: (c[0].key, c[1].table, c[2].table)):
                K = compose(G, F)
                detail["transitive"] += 1
                skey = (X, Z, f, h, K, x0)
                if skey not in searched:
                    searched[skey] = _iteration_search(X, Z, f, h, K, x0, k_cap).found
                    detail["transitive_searched"] += 1
                if not searched[skey]:
                    case = {
                        "X": _topo(X), "Y": _topo(Y), "Z": _topo(Z),
                        "f": list(f.table), "g": list(g.table), "h": list(h.table),
                        "F": list(F.table), "G": list(G.table), "x0": x0, "y0": F(x0),
                        "failed": "search",
                    }
                    return _fail(suite, detail["transitive"], "transitivity", case, detail)
    total = detail["reflexive"] + detail["symmetric"] + detail["transitive"]
    return SuiteResult(suite, PASS, total, None, detail)


def _paths(I: IntervalModel, Y: BitopSpace) -> tuple[PointMap, ...]:
    return _maps(I.space, Y)


def _path_search(I, Y, f, g, F, k_cap):
    for k in range(1, k_cap + 1):
        res = search_homotopy(
            I.space, Y, standard_interval(k), f, g, F, mode="path", endpoints=(F(I.e0), F(I.e1)), dom=I
        )
        if res.found:
            return res
    return res


def equivalence_relation_ph(max_points: int = 2, k: int = 1, k_cap: int = 3) -> SuiteResult:
    """Path homotopy on the ``k``-subdivided interval model.

    Reflexivity: f on the model against itself via the identity path, by
    search up to ``k_cap``. Symmetry: reversal keeps the endpoint rows and
    swaps the interior conditions. Transitivity: f to g via a path F inside
    the model, g to h via a path G into Z, then search via ``G o F``.
    Target spaces range over all spaces with at most ``max_points`` points.
    """
    suite = "equivalence_relation_PH"
    I = standard_interval(k)
    T = standard_interval(k)
    detail = {"reflexive": 0, "symmetric": 0, "transitive": 0, "transitive_searched": 0}
    dyn = _maps(I.space, I.space)
    idp = PointMap.identity(I.n)
    # reflexivity failures are collected rather than fatal so the other two
    # properties are still exercised
    refl_fail = []
    for f in dyn:
        detail["reflexive"] += 1
        if not _path_search(I, I.space, f, f, idp, k_cap).found:
            fixes_ends = f(I.e0) == I.e0 and f(I.e1) == I.e1
            refl_fail.append({"f": list(f.table), "fixes_endpoints": fixes_ends})
    detail["reflexive_failures"] = len(refl_fail)
    targets = [I.space] + small_spaces(max_points)
    succ: dict[tuple, list] = {}
    for Y in targets:
        for F in _paths(I, Y):
            for f in dyn:
                for g in _maps(Y, Y):
                    res = search_homotopy(I.space, Y, T, f, g, F, mode="path", endpoints=(F(I.e0), F(I.e1)), dom=I)
                    if not res.found:
                        continue
                    detail["symmetric"] += 1
                    rev = verify_path_between(reverse(res.homotopy), I, compose(g, F), compose(F, f), F(I.e0), F(I.e1))
                    if not rev.ok:
                        witness = {"Y": _topo(Y), "f": list(f.table), "g": list(g.table), "F": list(F.table)}
                        return SuiteResult(suite, FINDING, detail["symmetric"], {"symmetry": witness}, detail)
                    succ.setdefault((Y, g), []).append((f, F))
    searched: dict[tuple, bool] = {}
    trans_fail: list[dict] = []
    # second leg: g on the model to h on Z via a path G
    onward: dict[PointMap, list] = {}
    for (Z, h), items in succ.items():
        for g, G in items:
            onward.setdefault(g, []).append((Z, h, G))
    for (Y, g), incoming in succ.items():
        if Y != I.space:
            continue
        for Z, h, G in onward.get(g, []):
            for f, F in incoming:
                K = compose(G, F)
                detail["transitive"] += 1
                skey = (Z, f, h, K)
                if skey not in searched:
                    searched[skey] = _path_search(I, Z, f, h, K, k_cap).found
                    detail["transitive_searched"] += 1
                if not searched[skey]:
                    trans_fail.append({
                        "Z": _topo(Z), "f": list(f.table), "g": list(g.table), "h": list(h.table),
                        "F": list(F.table), "G": list(G.table), "K": list(K.table), "k_cap": k_cap,
                    })
    detail["transitive_failures"] = len(trans_fail)
    total = detail["reflexive"] + detail["symmetric"] + detail["transitive"]
    witness = {}
    if refl_fail:
        witness["reflexivity"] = {"path": "identity", "k_cap": k_cap, "first": refl_fail[0]}
    if trans_fail:
        witness["transitivity"] = trans_fail[0]
    if witness:
        return SuiteResult(suite, FINDING, total, witness, detail)
    return SuiteResult(suite, PASS, total, None, detail)
