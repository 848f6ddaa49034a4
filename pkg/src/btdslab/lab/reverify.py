"""Independent re-confirmation of FINDING witnesses.

Nothing here goes through the bitmask kernels or the topology classes.
Open families are rebuilt by brute-force closure from what the fixture
declares (or from minimal neighbourhood lists for suite witnesses),
product topologies are tested rectangle by rectangle, and homotopy
non-existence is re-derived by enumerating every table that meets the
boundary conditions.
"""

from __future__ import annotations

from dataclasses import replace
from itertools import product as cartesian
from typing import Any, Iterable, Iterator

import yaml

from btdslab.lab.config import SweepConfig

CONFIRMED, FAILED, UNSUPPORTED = "confirmed", "failed", "unsupported"

Family = set[frozenset]


# ---------------------------------------------------------------- open families


def close_family(points: Iterable, family: Iterable[Iterable]) -> Family:
    """Smallest family containing ``family``, the empty set and the whole set, closed under union and intersection."""
    full = frozenset(points)
    fam: Family = {frozenset(), full} | {frozenset(u) for u in family}
    while True:
        new = {a | b for a in fam for b in fam} | {a & b for a in fam for b in fam}
        if new <= fam:
            return fam
        fam |= new


def all_subsets(points: list) -> Family:
    return {frozenset(c for c, keep in zip(points, bits) if keep) for bits in cartesian((0, 1), repeat=len(points))}


def declared_family(points: list[str], spec: Any) -> Family:
    if spec == "discrete":
        return all_subsets(points)
    if spec == "indiscrete":
        return {frozenset(), frozenset(points)}
    return close_family(points, [[str(p) for p in u] for u in spec])


def family_from_nbhds(n: int, nbhds: list[int]) -> Family:
    """Union closure of the listed neighbourhood masks, as point sets."""
    sets = [frozenset(p for p in range(n) if (m >> p) & 1) for m in nbhds]
    fam: Family = {frozenset(), frozenset(range(n))}
    for bits in cartesian((0, 1), repeat=n):
        u = frozenset()
        for s, keep in zip(sets, bits):
            if keep:
                u |= s
        fam.add(u)
    return fam


def interval_family(k: int) -> Family:
    """Opens of the ``k``-subdivided interval: an even (closed) point drags in its neighbours."""
    n = 2 * k + 1
    out: Family = set()
    for s in all_subsets(list(range(n))):
        if all({q for q in (p - 1, p + 1) if 0 <= q < n} <= s for p in s if p % 2 == 0):
            out.add(s)
    return out


def product_is_open(s: frozenset, left: Family, right: Family) -> bool:
    for x, t in s:
        if not any(
            x in u and t in v and all((a, b) in s for a in u for b in v)
            for u in left
            for v in right
        ):
            return False
    return True


def preimage(table: dict, target: frozenset) -> frozenset:
    return frozenset(x for x, v in table.items() if v in target)


def continuous(table: dict, dom: Family, cod: Family) -> tuple[bool, frozenset | None]:
    for u in sorted(cod, key=lambda s: (len(s), sorted(map(str, s)))):
        if preimage(table, u) not in dom:
            return False, u
    return True, None


# ---------------------------------------------------------------- homotopy tables


class SmallSystem:
    """A bitopological space given by its two open families on ``range(n)``."""

    def __init__(self, n: int, fam1: Family, fam2: Family):
        self.n = n
        self.fams = (fam1, fam2)

    @classmethod
    def from_nbhds(cls, n: int, mn: list[list[int]]) -> SmallSystem:
        return cls(n, family_from_nbhds(n, mn[0]), family_from_nbhds(n, mn[1]))

    @classmethod
    def interval(cls, k: int) -> SmallSystem:
        fam = interval_family(k)
        return cls(2 * k + 1, fam, fam)


def table_continuous(X: SmallSystem, Y: SmallSystem, k: int, cells: dict) -> bool:
    tfam = interval_family(k)
    for i in (0, 1):
        for u in Y.fams[i]:
            if not product_is_open(preimage(cells, u), X.fams[i], tfam):
                return False
    return True


def map_continuous(X: SmallSystem, Y: SmallSystem, table: list[int]) -> bool:
    cells = dict(enumerate(table))
    return all(continuous(cells, X.fams[i], Y.fams[i])[0] for i in (0, 1))


def pins_btds(n: int, k: int, start: list[int], end: list[int]) -> dict | None:
    pins: dict = {}
    for x in range(n):
        if not (_pin(pins, (x, 0), start[x]) and _pin(pins, (x, 2 * k), end[x])):
            return None
    return pins


def pins_iteration(k: int, f: list[int], start: list[int], end: list[int], x0: int) -> dict | None:
    """Boundary conditions ``H(x_{n+1}, e0) = start(x_n)``, ``H(x_{n+1}, e1) = end(x_n)`` along the orbit."""
    pins: dict = {}
    x, seen = x0, set()
    while x not in seen:
        seen.add(x)
        nxt = f[x]
        if not (_pin(pins, (nxt, 0), start[x]) and _pin(pins, (nxt, 2 * k), end[x])):
            return None
        x = nxt
    return pins


def pins_path(m: int, k: int, start: list[int], end: list[int], a: int, b: int) -> dict | None:
    """Endpoint rows of the model domain held at ``a`` and ``b``; interior rows run start to end."""
    pins: dict = {}
    last = m - 1
    for t in range(2 * k + 1):
        if not (_pin(pins, (0, t), a) and _pin(pins, (last, t), b)):
            return None
    for r in range(1, last):
        if not (_pin(pins, (r, 0), start[r]) and _pin(pins, (r, 2 * k), end[r])):
            return None
    return pins


def _pin(pins: dict, cell: tuple, v: int) -> bool:
    return pins.setdefault(cell, v) == v


def tables(X: SmallSystem, Y: SmallSystem, k: int, pins: dict) -> Iterator[dict]:
    cells = [(x, t) for x in range(X.n) for t in range(2 * k + 1)]
    free = [c for c in cells if c not in pins]
    for vals in cartesian(range(Y.n), repeat=len(free)):
        table = dict(pins)
        table.update(zip(free, vals))
        if table_continuous(X, Y, k, table):
            yield table


def exists_table(X: SmallSystem, Y: SmallSystem, k: int, pins: dict | None) -> bool:
    return pins is not None and next(tables(X, Y, k, pins), None) is not None


def compose(outer: list[int], inner: list[int]) -> list[int]:
    return [outer[v] for v in inner]


# ---------------------------------------------------------------- fixture claims


class FixtureView:
    """Raw YAML view of an instance document, with label-level open families."""

    def __init__(self, data: dict):
        self.data = data
        self.points = {s: [str(p) for p in d["points"]] for s, d in data["spaces"].items()}
        self.fams = {
            s: (declared_family(self.points[s], d["tau1"]), declared_family(self.points[s], d["tau2"]))
            for s, d in data["spaces"].items()
        }

    def map_table(self, name: str) -> dict[str, str]:
        return {str(k): str(v) for k, v in self.data["maps"][name]["values"].items()}


def _labels(xs: Iterable) -> list[str]:
    return sorted(str(x) for x in xs)


def reverify_map_continuity(view: FixtureView, claim: dict, result: dict) -> tuple[str, str]:
    w = result.get("witness")
    if not w:
        return UNSUPPORTED, "no witness recorded"
    m = view.data["maps"][claim["map"]]
    i = int(w["topology"]) - 1
    dom_fam, cod_fam = view.fams[m["domain"]][i], view.fams[m["codomain"]][i]
    u = frozenset(w["open"])
    if u not in cod_fam:
        return FAILED, f"{w['open']} is not open in topology {i + 1} of {m['codomain']}"
    pre = preimage(view.map_table(claim["map"]), u)
    if _labels(pre) != _labels(w["preimage"]):
        return FAILED, f"recomputed preimage {_labels(pre)} differs from {w['preimage']}"
    if pre in dom_fam:
        return FAILED, f"preimage {_labels(pre)} is open in {m['domain']}"
    return CONFIRMED, f"preimage {_labels(pre)} of open {_labels(u)} is not open in topology {i + 1}"


def reverify_homotopy(view: FixtureView, claim: dict, result: dict) -> tuple[str, str]:
    w = result.get("witness") or {}
    hdef = view.data["homotopies"][claim["homotopy"]]
    k = int(hdef["k"])
    rows = {str(x): [str(v) for v in r] for x, r in hdef["values"].items()}
    cells = {(x, t): v for x, r in rows.items() for t, v in enumerate(r)}
    reasons = []
    if "boundary" in w:
        b = w["boundary"]
        f = view.map_table(claim["f"])
        g = view.map_table(claim["g"])
        F = view.map_table(hdef["bridge"])
        t = 0 if b["time"] == "e0" else 2 * k
        want = F[f[b["point"]]] if t == 0 else g[F[b["point"]]]
        got = cells[(b["point"], t)]
        if got == want or want != b["expected"]:
            return FAILED, f"boundary at {b['point']},{b['time']} does not fail as recorded"
        reasons.append(f"boundary fails at {b['point']},{b['time']}")
    if "continuity" in w:
        c = w["continuity"]
        i = int(c["topology"]) - 1
        u = frozenset(c["open"])
        if u not in view.fams[hdef["codomain"]][i]:
            return FAILED, f"{c['open']} is not open in {hdef['codomain']}"
        pre = preimage(cells, u)
        recorded = {(lab[1:].rsplit(",t", 1)[0], int(lab.rsplit(",t", 1)[1][:-1])) for lab in c["preimage"]}
        if pre != recorded:
            return FAILED, "recomputed product preimage differs from the recorded one"
        if product_is_open(pre, view.fams[hdef["domain"]][i], interval_family(k)):
            return FAILED, "product preimage is open"
        reasons.append(f"preimage of {_labels(u)} is not open in the product topology {i + 1}")
    if not reasons:
        return UNSUPPORTED, "no boundary or continuity witness recorded"
    return CONFIRMED, "; ".join(reasons)


def reverify_composition(view: FixtureView, claim: dict, result: dict) -> tuple[str, str]:
    outer, inner = view.map_table(claim["outer"]), view.map_table(claim["inner"])
    table = {x: outer[v] for x, v in inner.items()}
    if table != result["verdict"]:
        return FAILED, "recomputed composition table differs from the report"
    if table == result.get("expect"):
        return FAILED, "composition table matches the expectation"
    return CONFIRMED, "composition table differs from the expectation"


FIXTURE_CHECKERS = {
    "pairwise_continuous": reverify_map_continuity,
    "continuous": reverify_map_continuity,
    "homotopy_boundary": reverify_homotopy,
    "homotopy_continuous": reverify_homotopy,
    "btds_homotopy": reverify_homotopy,
    "composition": reverify_composition,
}


def reverify_claim(data: dict, result: dict) -> tuple[str, str]:
    claim = next((c for c in data.get("claims") or [] if c.get("id") == result["id"]), None)
    if claim is None:
        return FAILED, f"claim {result['id']!r} not found in the instance"
    checker = FIXTURE_CHECKERS.get(claim["check"])
    if checker is None:
        return UNSUPPORTED, f"no independent checker for {claim['check']}"
    return checker(FixtureView(data), claim, result)


# ---------------------------------------------------------------- suite witnesses


def _premise(X: SmallSystem, Y: SmallSystem, k_max: int, pins_at) -> bool:
    return any(exists_table(X, Y, k, pins_at(k)) for k in range(1, k_max + 1))


def _absent(X: SmallSystem, Y: SmallSystem, k_cap: int, pins_at) -> tuple[bool, str]:
    if pins_at(1) is None:
        return True, "boundary conditions conflict on a single cell, at every subdivision level"
    for k in range(1, k_cap + 1):
        if exists_table(X, Y, k, pins_at(k)):
            return False, f"a table exists at k={k}"
    return True, f"no table meets the conditions at any k <= {k_cap}"


def reverify_ih_transitivity(w: dict, k_cap: int = 3) -> tuple[str, str]:
    X = SmallSystem.from_nbhds(len(w["X"][0]), w["X"])
    Y = SmallSystem.from_nbhds(len(w["Y"][0]), w["Y"])
    Z = SmallSystem.from_nbhds(len(w["Z"][0]), w["Z"])
    f, g, h, F, G, x0 = w["f"], w["g"], w["h"], w["F"], w["G"], w["x0"]
    y0 = F[x0]
    for name, (S, T, a, m, s, e, p) in {
        "f~g": (X, Y, f, F, compose(F, f), compose(g, F), x0),
        "g~h": (Y, Z, g, G, compose(G, g), compose(h, G), y0),
    }.items():
        if not (map_continuous(S, T, m) and map_continuous(S, S, a)):
            return FAILED, f"premise {name}: maps are not pairwise continuous"
        if not _premise(S, T, 1, lambda k: pins_iteration(k, a, s, e, p)):
            return FAILED, f"premise {name} has no iteration homotopy at k=1"
    K = compose(G, F)
    ok, why = _absent(X, Z, k_cap, lambda k: pins_iteration(k, f, compose(K, f), compose(h, K), x0))
    return (CONFIRMED if ok else FAILED), f"premises hold at k=1; conclusion: {why}"


def reverify_ph(w: dict, k_cap: int = 3) -> list[tuple[str, str, str]]:
    out = []
    I = SmallSystem.interval(1)
    if "reflexivity" in w:
        f = w["reflexivity"]["first"]["f"]
        if not map_continuous(I, I, f):
            out.append(("reflexivity", FAILED, "f is not pairwise continuous on the model"))
        else:
            idp = list(range(I.n))
            ok, why = _absent(I, I, k_cap, lambda k: pins_path(I.n, k, compose(idp, f), compose(f, idp), 0, I.n - 1))
            out.append(("reflexivity", CONFIRMED if ok else FAILED, why))
    if "transitivity" in w:
        c = w["transitivity"]
        Z = SmallSystem.from_nbhds(len(c["Z"][0]), c["Z"])
        f, g, h, F, G = c["f"], c["g"], c["h"], c["F"], c["G"]
        K = compose(G, F)
        premises = (
            ("f~g", I, I, f, F, compose(F, f), compose(g, F)),
            ("g~h", I, Z, g, G, compose(G, g), compose(h, G)),
        )
        bad = None
        for name, S, T, a, m, s, e in premises:
            if not (map_continuous(S, T, m) and map_continuous(S, S, a)):
                bad = f"premise {name}: maps are not pairwise continuous"
            elif not _premise(S, T, 1, lambda k: pins_path(S.n, k, s, e, m[0], m[-1])):
                bad = f"premise {name} has no path homotopy at k=1"
            if bad:
                break
        if bad:
            out.append(("transitivity", FAILED, bad))
        else:
            ok, why = _absent(I, Z, int(c.get("k_cap", k_cap)),
                              lambda k: pins_path(I.n, k, compose(K, f), compose(h, K), K[0], K[-1]))
            out.append(("transitivity", CONFIRMED if ok else FAILED, f"premises hold at k=1; conclusion: {why}"))
    return out


def reverify_h_search(w: dict, k_cap: int = 3) -> tuple[str, str]:
    for what, c in w.items():
        if c.get("failed") != "search":
            return UNSUPPORTED, f"{what}: constructed homotopy failures need the table, which is not recorded"
        X = SmallSystem.from_nbhds(len(c["X"][0]), c["X"])
        Y = SmallSystem.from_nbhds(len(c["Y"][0]), c["Y"])
        f, g, F = c["f"], c["g"], c["F"]
        ok, why = _absent(X, Y, k_cap, lambda k: pins_btds(X.n, k, compose(F, f), compose(g, F)))
        return (CONFIRMED if ok else FAILED), why
    return UNSUPPORTED, "empty witness"


def reverify_composition_case(w: dict) -> tuple[str, str]:
    X = SmallSystem.from_nbhds(len(w["X"][0]), w["X"])
    Y = SmallSystem.from_nbhds(len(w["Y"][0]), w["Y"])
    m = compose(w["F"], w["f"]) if w["failed"] == "F o f" else compose(w["g"], w["F"])
    if map_continuous(X, Y, m):
        return FAILED, f"{w['failed']} is pairwise continuous"
    return CONFIRMED, f"{w['failed']} is not pairwise continuous"


def reverify_instance_verdicts(suite: str, w: dict, cfg: SweepConfig) -> tuple[str, str]:
    """Selection-suite witnesses: re-decide the named verdicts with the oracle over all covers."""
    from btdslab.lab.sweep import reconfirm
    from btdslab.errors import OracleDisagreement

    fam = suite.split("_")[-1] if suite.startswith("implication_diagram") else suite.split("_")[0]
    if "arrow" in w:
        a, b = w["arrow"]
        expected = {f"{fam}_{a}": True, f"{fam}_{b}": False}
    else:
        expected = {f"{fam}_{p}": v for p, v in w["verdicts"].items()}
    row = {"key": w["key"], "n": w["n"], "min_nbhd": w["min_nbhd"]}
    try:
        reconfirm(row, w["context"], expected, cfg, expected)
    except OracleDisagreement as exc:
        return FAILED, str(exc)
    return CONFIRMED, "oracle over all covers reproduces the recorded verdicts"


# ---------------------------------------------------------------- reports


def _load_instance_data(source: str) -> dict:
    if source.startswith("bundled:"):
        from btdslab.lab.paper import _data

        return yaml.safe_load(_data(source.split(":", 1)[1]))
    with open(source) as fh:
        return yaml.safe_load(fh)


def _suite_checks(entry: dict, cfg: SweepConfig) -> list[tuple[str, str, str]]:
    sid, w = entry["id"], entry["witness"] or {}
    if sid == "equivalence_relation_IH" and "transitivity" in w:
        return [("transitivity", *reverify_ih_transitivity(w["transitivity"]))]
    if sid == "equivalence_relation_PH":
        return reverify_ph(w)
    if sid == "equivalence_relation_H":
        return [("search", *reverify_h_search(w))]
    if sid.startswith("composition"):
        return [("composition", *reverify_composition_case(w))]
    if "context" in w:
        return [("verdicts", *reverify_instance_verdicts(sid, w, cfg))]
    return [("witness", UNSUPPORTED, f"no independent checker for {sid}")]


def reverify_report(report: dict, cfg: SweepConfig | None = None) -> dict:
    """Re-confirm every FINDING (verify-paper), disagreement (check) or finding (search) in ``report``."""
    cfg = cfg or SweepConfig()
    results = []
    if report.get("report") == "verify-paper":
        opts = report.get("options", {})
        cfg = replace(cfg, **{k: opts[k] for k in ("interval_k", "oracle_len", "anchor_reading", "target_openness") if k in opts})
        fixtures = {f["source"].split(":", 1)[1]: f for f in report.get("fixtures", [])}
        for e in report["entries"]:
            if e["status"] != "FINDING":
                continue
            if e["kind"] == "fixture":
                w = e["witness"]
                data = _load_instance_data(f"bundled:{w['fixture']}")
                claim = next(c for c in fixtures[w["fixture"]]["claims"] if c["id"] == w["claim"])
                results.append({"id": e["id"], "part": "claim", **_status(*reverify_claim(data, claim))})
            else:
                for part, status, why in _suite_checks(e, cfg):
                    results.append({"id": e["id"], "part": part, **_status(status, why)})
    elif "claims" in report:
        data = _load_instance_data(report["source"])
        for c in report["claims"]:
            if c["status"] == "disagree":
                results.append({"id": c["id"], "part": "claim", **_status(*reverify_claim(data, c))})
    elif "findings" in report:
        from btdslab.errors import OracleDisagreement
        from btdslab.lab.sweep import reconfirm

        b = report["bound"]
        cfg = replace(cfg, **{k: b[k] for k in ("interval_k", "oracle_len", "anchor_reading", "target_openness")})
        for fd in report["findings"]:
            row = {"key": fd["key"], "n": fd["n"], "min_nbhd": fd["min_nbhd"]}
            try:
                reconfirm(row, fd["context"], fd["values"], cfg, fd["values"])
                st = _status(CONFIRMED, "oracle over all covers reproduces the recorded values")
            except OracleDisagreement as exc:
                st = _status(FAILED, str(exc))
            results.append({"id": f"{fd['key'][:12]}/{fd['context']}", "part": "finding", **st})
    else:
        raise ValueError("unrecognised report: expected a verify-paper, check or search report")
    counts = {s: sum(r["status"] == s for r in results) for s in (CONFIRMED, FAILED, UNSUPPORTED)}
    return {"results": results, "summary": counts, "ok": counts[FAILED] == 0}


def _status(status: str, reason: str) -> dict:
    return {"status": status, "reason": reason}
