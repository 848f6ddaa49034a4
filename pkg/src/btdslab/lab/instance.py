"""YAML instance documents: labelled spaces, maps, homotopy tables and claims.

Topologies are written as explicit lists of open sets (by point label) or
the keywords ``discrete`` / ``indiscrete``. Everything is resolved and
shape-checked on load, so a loaded ``InstanceDoc`` only refers to things
that exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from btdslab.bitop import BitopSpace
from btdslab.dynamics import PointMap
from btdslab.errors import LabError, ParseError, StrictNotATopology
from btdslab.fintop import FiniteTopology, from_open_family, mask, members
from btdslab.homotopy import DEFAULT_K_CAP, Homotopy, standard_interval

MAX_INSTANCE_POINTS = 16

CLAIM_CHECKS = {
    "pairwise_continuous": ("map",),
    "continuous": ("map", "topology"),
    "composition": ("outer", "inner"),
    "homotopy_boundary": ("homotopy", "f", "g"),
    "homotopy_continuous": ("homotopy",),
    "btds_homotopy": ("homotopy", "f", "g"),
    "homotopy_search": ("f", "g", "bridge"),
    "axiom": ("space", "name"),
    "selection": ("space", "property"),
}


@dataclass(frozen=True)
class LabelledSpace:
    name: str
    labels: tuple[str, ...]
    space: BitopSpace
    declared: tuple[tuple[int, ...] | None, tuple[int, ...] | None]  # open masks as written
    notes: tuple[str, ...] = ()

    def index(self, label: Any) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ParseError(f"space {self.name}: unknown point {label!r}") from None

    def fmt(self, a: int) -> list[str]:
        return [self.labels[p] for p in members(a)]


@dataclass(frozen=True)
class NamedMap:
    name: str
    domain: str
    codomain: str
    map: PointMap


@dataclass(frozen=True)
class NamedHomotopy:
    name: str
    domain: str
    codomain: str
    bridge: str
    homotopy: Homotopy


@dataclass
class InstanceDoc:
    name: str
    anchor: str
    spaces: dict[str, LabelledSpace]
    maps: dict[str, NamedMap]
    homotopies: dict[str, NamedHomotopy]
    claims: list[dict]
    source: str = ""
    notes: list[str] = field(default_factory=list)


def _topology(spec: Any, labels: tuple[str, ...], where: str, strict: bool):
    n = len(labels)
    if spec == "discrete":
        return FiniteTopology.discrete(n), None, []
    if spec == "indiscrete":
        return FiniteTopology.indiscrete(n), None, []
    if not isinstance(spec, list):
        raise ParseError(f"{where}: topology must be 'discrete', 'indiscrete' or a list of open sets")
    fam = []
    for u in spec:
        if not isinstance(u, list):
            raise ParseError(f"{where}: open set {u!r} must be a list of point labels")
        idx = []
        for lab in u:
            if str(lab) not in labels:
                raise ParseError(f"{where}: unknown point {lab!r}")
            idx.append(labels.index(str(lab)))
        fam.append(mask(idx))
    try:
        t = from_open_family(n, fam, strict=strict)
    except StrictNotATopology as exc:
        raise ParseError(f"{where}: {exc}") from exc
    notes = []
    if set(fam) | {0, t.full} != set(t.opens):
        notes.append(f"{where}: declared family is not a topology; using the one it generates")
    return t, tuple(sorted(set(fam))), notes


def _require(d: Any, key: str, where: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def parse_instance(data: Any, strict_topology: bool = False, source: str = "") -> InstanceDoc:
    if not isinstance(data, dict):
        raise ParseError("instance document must be a mapping")
    notes: list[str] = []
    spaces: dict[str, LabelledSpace] = {}
    for sname, sdef in (data.get("spaces") or {}).items():
        where = f"space {sname}"
        labels = tuple(str(p) for p in _require(sdef, "points", where))
        if not labels or len(set(labels)) != len(labels):
            raise ParseError(f"{where}: points must be a nonempty list of distinct labels")
        if len(labels) > MAX_INSTANCE_POINTS:
            raise ParseError(f"{where}: more than {MAX_INSTANCE_POINTS} points")
        t1, d1, n1 = _topology(_require(sdef, "tau1", where), labels, f"{where} tau1", strict_topology)
        t2, d2, n2 = _topology(_require(sdef, "tau2", where), labels, f"{where} tau2", strict_topology)
        notes += n1 + n2
        spaces[sname] = LabelledSpace(sname, labels, BitopSpace(t1, t2), (d1, d2))

    def space_of(name: Any, where: str) -> LabelledSpace:
        if name not in spaces:
            raise ParseError(f"{where}: unknown space {name!r}")
        return spaces[name]

    maps: dict[str, NamedMap] = {}
    for mname, mdef in (data.get("maps") or {}).items():
        where = f"map {mname}"
        dom = space_of(_require(mdef, "domain", where), where)
        cod = space_of(_require(mdef, "codomain", where), where)
        values = _require(mdef, "values", where)
        if not isinstance(values, dict) or {str(k) for k in values} != set(dom.labels):
            raise ParseError(f"{where}: values must assign every point of {dom.name} exactly once")
        vals = {str(k): v for k, v in values.items()}
        table = tuple(cod.index(vals[lab]) for lab in dom.labels)
        maps[mname] = NamedMap(mname, dom.name, cod.name, PointMap(dom.space.n, cod.space.n, table))

    def map_of(name: Any, where: str) -> NamedMap:
        if name not in maps:
            raise ParseError(f"{where}: unknown map {name!r}")
        return maps[name]

    homotopies: dict[str, NamedHomotopy] = {}
    for hname, hdef in (data.get("homotopies") or {}).items():
        where = f"homotopy {hname}"
        dom = space_of(_require(hdef, "domain", where), where)
        cod = space_of(_require(hdef, "codomain", where), where)
        bridge = map_of(_require(hdef, "bridge", where), where)
        if (bridge.domain, bridge.codomain) != (dom.name, cod.name):
            raise ParseError(f"{where}: bridge {bridge.name} does not go from {dom.name} to {cod.name}")
        k = _require(hdef, "k", where)
        if not isinstance(k, int) or not 1 <= k <= DEFAULT_K_CAP:
            raise ParseError(f"{where}: k must be an integer in 1..{DEFAULT_K_CAP}")
        T = standard_interval(k)
        values = _require(hdef, "values", where)
        if not isinstance(values, dict) or {str(x) for x in values} != set(dom.labels):
            raise ParseError(f"{where}: values must give a row for every point of {dom.name}")
        vals = {str(x): row for x, row in values.items()}
        rows = []
        for lab in dom.labels:
            row = vals[lab]
            if not isinstance(row, list) or len(row) != T.n:
                raise ParseError(f"{where}: row for {lab} needs {T.n} values (interval model k={k})")
            rows.append(tuple(cod.index(v) for v in row))
        H = Homotopy(dom.space, cod.space, T, bridge.map, tuple(rows))
        homotopies[hname] = NamedHomotopy(hname, dom.name, cod.name, bridge.name, H)

    claims = data.get("claims") or []
    if not isinstance(claims, list):
        raise ParseError("claims must be a list")
    seen_ids = set()
    for n_claim, c in enumerate(claims):
        where = f"claim #{n_claim}"
        check = _require(c, "check", where)
        if check not in CLAIM_CHECKS:
            raise ParseError(f"{where}: unknown check {check!r}")
        for key in CLAIM_CHECKS[check]:
            _require(c, key, where)
        cid = c.get("id", f"{check}-{n_claim}")
        if cid in seen_ids:
            raise ParseError(f"{where}: duplicate claim id {cid!r}")
        seen_ids.add(cid)
        c.setdefault("id", cid)
        for key in ("map", "outer", "inner", "f", "g", "bridge"):
            if key in c:
                map_of(c[key], where)
        if "homotopy" in c and c["homotopy"] not in homotopies:
            raise ParseError(f"{where}: unknown homotopy {c['homotopy']!r}")
        if "space" in c:
            space_of(c["space"], where)
        if check == "continuous" and c["topology"] not in (1, 2):
            raise ParseError(f"{where}: topology must be 1 or 2")
        if check == "composition" and maps[c["inner"]].codomain != maps[c["outer"]].domain:
            raise ParseError(f"{where}: {c['outer']} cannot follow {c['inner']}")
        if check == "selection" and ("homotopy" in c) != ("f" in c and "g" in c):
            raise ParseError(f"{where}: an anchored selection claim needs homotopy, f and g")

    meta = data.get("metadata") or {}
    return InstanceDoc(
        name=str(meta.get("name", data.get("name", ""))),
        anchor=str(meta.get("anchor", data.get("anchor", ""))),
        spaces=spaces,
        maps=maps,
        homotopies=homotopies,
        claims=claims,
        source=source,
        notes=notes,
    )


def load_instance(path: str | Path, strict_topology: bool = False) -> InstanceDoc:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: invalid YAML: {exc}") from exc
    try:
        return parse_instance(data, strict_topology=strict_topology, source=str(path))
    except ParseError:
        raise
    except (LabError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
