"""Exhaustive sweeps over topology pairs, the JSONL atlas, and predicate search.

One atlas row per bitopological space. A row carries the separation
axioms, the four classical properties and, for every context in the
bundled library, the six H and six PH verdicts. Rows are sorted by a
sha256 of the canonical space description, so the atlas is byte-stable
whatever the worker count or interruption history.
"""

from __future__ import annotations

import hashlib
import json
import os
from itertools import permutations
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable, Iterator

from btdslab.bitop import BitopSpace, axiom_vector, enumerate_spaces
from btdslab.contexts import context_library
from btdslab.errors import CapExceeded, OracleDisagreement, ParseError
from btdslab.fintop import FiniteTopology, relabel
from btdslab.lab.config import SweepConfig
from btdslab.lab.predicate import Predicate, parse_predicate
from btdslab.selection import (
    CLASSICAL_PROPERTIES,
    H_PROPERTIES,
    FamilyKind,
    SelectionProblem,
    classical_vector,
    decide_anchored_property,
    oracle_bounded,
)

EXHAUSTED = "exhausted, none exist at this scale"

AXIOMS = (
    "pairwise_T1",
    "pairwise_regular",
    "pairwise_T3",
    "pairwise_Hausdorff",
    "pairwise_locally_compact",
    "pairwise_P_space",
)
H_NAMES = tuple(f"H_{p}" for p in H_PROPERTIES)
PH_NAMES = tuple(f"PH_{p}" for p in H_PROPERTIES)
PREDICATE_NAMES = frozenset(H_NAMES + PH_NAMES + CLASSICAL_PROPERTIES + AXIOMS)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def space_key(Y: BitopSpace) -> str:
    canon = dumps({"n": Y.n, "tau1": list(Y.t1.min_nbhd), "tau2": list(Y.t2.min_nbhd)})
    return hashlib.sha256(canon.encode()).hexdigest()


def is_canonical(Y: BitopSpace) -> bool:
    """True when ``Y`` is the smallest relabelling of itself (isomorphism dedup)."""
    here = Y.key
    for perm in permutations(range(Y.n)):
        if (relabel(Y.t1, perm).min_nbhd, relabel(Y.t2, perm).min_nbhd) < here:
            return False
    return True


def iter_spaces(cfg: SweepConfig) -> Iterator[BitopSpace]:
    for n in range(cfg.min_points, cfg.max_points + 1):
        for Y in enumerate_spaces(n):
            if not cfg.iso_dedup or is_canonical(Y):
                yield Y


def _anchored(Y, props, ctx, cfg: SweepConfig, reading: str, methods: set[str]) -> dict[str, bool]:
    out = {}
    for p in props:
        rep = decide_anchored_property(
            Y, p, ctx, anchor_reading=reading, target_openness=cfg.target_openness, oracle_len=cfg.oracle_len
        )
        methods.add(rep.method)
        out[p] = rep.verdict
    return out


def classify_space(Y: BitopSpace, cfg: SweepConfig) -> dict:
    """Full property vector of one space; raises OracleDisagreement on a dual-path split."""
    props = tuple(H_PROPERTIES)
    classical = classical_vector(Y, oracle_len=cfg.oracle_len)
    methods = {v.method for v in classical.values()}
    contexts = []
    for b in context_library(Y, cfg.interval_k):
        entry = {
            "name": b.name,
            "k": b.h_homotopy.T.k,
            "anchors": [list(a) for a in b.h.anchors],
            "H": _anchored(Y, props, b.h, cfg, cfg.anchor_reading, methods),
            "PH": _anchored(Y, props, b.ph, cfg, cfg.anchor_reading, methods),
        }
        if cfg.compare_readings:
            other = "union" if cfg.anchor_reading == "per-set" else "per-set"
            alt_h = _anchored(Y, props, b.h, cfg, other, methods)
            alt_ph = _anchored(Y, props, b.ph, cfg, other, methods)
            entry["reading_divergence"] = [f"H_{p}" for p in props if alt_h[p] != entry["H"][p]] + [
                f"PH_{p}" for p in props if alt_ph[p] != entry["PH"][p]
            ]
        contexts.append(entry)
    return {
        "key": space_key(Y),
        "n": Y.n,
        "tau1": Y.t1.describe(),
        "tau2": Y.t2.describe(),
        "min_nbhd": [list(Y.t1.min_nbhd), list(Y.t2.min_nbhd)],
        "axioms": axiom_vector(Y),
        "classical": {k: v.verdict for k, v in classical.items()},
        "contexts": contexts,
        "methods": sorted(methods),
    }


def row_space(row: dict) -> BitopSpace:
    n = row["n"]
    t1, t2 = row["min_nbhd"]
    return BitopSpace(FiniteTopology(n, tuple(t1)), FiniteTopology(n, tuple(t2)))


def instance_values(row: dict, ctx: dict) -> dict[str, bool]:
    """Name -> verdict map for one (space, context) instance, as predicates see it."""
    vals = dict(row["axioms"])
    vals.update(row["classical"])
    vals.update({f"H_{p}": v for p, v in ctx["H"].items()})
    vals.update({f"PH_{p}": v for p, v in ctx["PH"].items()})
    return vals


def iter_instances(rows: Iterable[dict]) -> Iterator[tuple[dict, dict, dict[str, bool]]]:
    for row in rows:
        for ctx in row["contexts"]:
            yield row, ctx, instance_values(row, ctx)


# ---------------------------------------------------------------- running


def _task(args: tuple) -> str:
    mn1, mn2, cfg = args
    n = len(mn1)
    Y = BitopSpace(FiniteTopology(n, mn1), FiniteTopology(n, mn2))
    return dumps(classify_space(Y, cfg))


def _header(cfg: SweepConfig) -> str:
    return dumps(
        {
            "checkpoint": 1,
            "min_points": cfg.min_points,
            "max_points": cfg.max_points,
            "iso_dedup": cfg.iso_dedup,
            **cfg.decision_options(),
        }
    )


def _read_partial(partial: Path, header: str) -> dict[str, str]:
    done: dict[str, str] = {}
    lines = partial.read_text().split("\n")
    if not lines or lines[0] != header:
        raise ParseError(f"checkpoint {partial} was written with a different configuration")
    for line in lines[1:]:
        try:
            row = json.loads(line)
        except json.JSONDecodeError:
            continue  # an interrupted write leaves at most one torn line
        done[row["key"]] = line
    return done


def run_enumerate(cfg: SweepConfig, out: str | Path, stop_after: int | None = None) -> dict:
    """Write the atlas for ``cfg`` to ``out``; resumes from ``out.partial`` when present.

    ``stop_after`` ends the run early after that many new rows, leaving the
    checkpoint behind (used to exercise resumption).
    """
    out = Path(out)
    partial = out.with_name(out.name + ".partial")
    header = _header(cfg)
    done = _read_partial(partial, header) if partial.exists() else {}
    # rewrite the checkpoint cleanly so a torn tail line does not linger
    with partial.open("w") as fh:
        fh.write(header + "\n")
        for line in done.values():
            fh.write(line + "\n")
    todo = []
    for Y in iter_spaces(cfg):
        if space_key(Y) not in done:
            todo.append((Y.t1.min_nbhd, Y.t2.min_nbhd, cfg))
    resumed = len(done)
    if stop_after is not None:
        todo = todo[:stop_after]
    with partial.open("a") as fh:
        if cfg.workers > 1 and len(todo) > 1:
            with Pool(cfg.workers) as pool:
                for line in pool.imap(_task, todo, chunksize=max(1, len(todo) // (cfg.workers * 8))):
                    fh.write(line + "\n")
                    done[json.loads(line)["key"]] = line
        else:
            for t in todo:
                line = _task(t)
                fh.write(line + "\n")
                fh.flush()
                done[json.loads(line)["key"]] = line
    expected = sum(1 for _ in iter_spaces(cfg))
    summary = {
        "rows": len(done),
        "expected_rows": expected,
        "resumed_rows": resumed,
        "complete": len(done) == expected,
        "out": str(out),
    }
    if not summary["complete"]:
        return summary
    tmp = out.with_name(out.name + ".tmp")
    with tmp.open("w") as fh:
        for key in sorted(done):
            fh.write(done[key] + "\n")
    os.replace(tmp, out)
    partial.unlink()
    summary["per_n"] = _count_per_n(done.values())
    return summary


def _count_per_n(lines: Iterable[str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for line in lines:
        n = str(json.loads(line)["n"])
        counts[n] = counts.get(n, 0) + 1
    return dict(sorted(counts.items()))


def read_atlas(path: str | Path) -> list[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line]


def classify_all(cfg: SweepConfig) -> list[dict]:
    """In-memory sweep, sorted by key like the atlas."""
    if cfg.workers > 1:
        todo = [(Y.t1.min_nbhd, Y.t2.min_nbhd, cfg) for Y in iter_spaces(cfg)]
        with Pool(cfg.workers) as pool:
            rows = [json.loads(line) for line in pool.imap(_task, todo, chunksize=8)]
    else:
        rows = [classify_space(Y, cfg) for Y in iter_spaces(cfg)]
    return sorted(rows, key=lambda r: r["key"])


# ---------------------------------------------------------------- search


def _oracle_any_cover(p: SelectionProblem, length: int) -> bool:
    """Oracle over every cover; over irredundant ones when all covers exceed the caps."""
    try:
        return oracle_bounded(p, length, all_covers=True)
    except CapExceeded:
        return oracle_bounded(p, length)


def reconfirm(row: dict, ctx_name: str, names: Iterable[str], cfg: SweepConfig, expected: dict[str, bool]) -> None:
    """Re-decide each anchored property with the bounded oracle over all covers.

    Independent of the characterization and of the irredundant-cover
    restriction; a mismatch with the recorded verdict is a hard error.
    """
    Y = row_space(row)
    bundle = next(b for b in context_library(Y, cfg.interval_k) if b.name == ctx_name)
    for name in names:
        if name.startswith("H_"):
            ctx, prop = bundle.h, name[2:]
        elif name.startswith("PH_"):
            ctx, prop = bundle.ph, name[3:]
        else:
            continue
        mode, target = H_PROPERTIES[prop]
        verdict = all(
            _oracle_any_cover(
                SelectionProblem(
                    Y, i, FamilyKind(target, i, j), mode, ctx.anchors, ctx.kind,
                    cfg.anchor_reading, cfg.target_openness,  # type: ignore[arg-type]
                ),
                cfg.oracle_len,
            )
            for i, j in ((1, 2), (2, 1))
        )
        if verdict != expected[name]:
            raise OracleDisagreement(f"{name} on {row['key'][:12]} / {ctx_name}: oracle says {verdict}")


def run_search(cfg: SweepConfig, rows: list[dict] | None = None) -> dict:
    if not cfg.predicate:
        raise ParseError("search needs --predicate")
    pred: Predicate = parse_predicate(cfg.predicate, PREDICATE_NAMES)
    if rows is None:
        rows = classify_all(cfg)
    findings = []
    checked = 0
    for row, ctx, vals in iter_instances(rows):
        checked += 1
        if pred(vals):
            reconfirm(row, ctx["name"], pred.names, cfg, vals)
            findings.append(
                {
                    "key": row["key"],
                    "n": row["n"],
                    "min_nbhd": row["min_nbhd"],
                    "tau1": row["tau1"],
                    "tau2": row["tau2"],
                    "context": ctx["name"],
                    "anchors": ctx["anchors"],
                    "values": {k: vals[k] for k in sorted(pred.names)},
                    "oracle_reconfirmed": True,
                }
            )
    return {
        "predicate": cfg.predicate,
        "bound": {
            "min_points": cfg.min_points,
            "max_points": cfg.max_points,
            "interval_k": cfg.interval_k,
            "oracle_len": cfg.oracle_len,
            "anchor_reading": cfg.anchor_reading,
            "target_openness": cfg.target_openness,
            "iso_dedup": cfg.iso_dedup,
        },
        "spaces_checked": len(rows),
        "instances_checked": checked,
        "status": "found" if findings else EXHAUSTED,
        "findings": findings,
    }
