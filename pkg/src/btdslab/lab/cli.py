"""Command-line driver.

Exit codes: 0 when the run completed (paper findings are data, not
failures), 1 on an internal invariant violation such as an oracle split
or a witness that does not re-confirm, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from btdslab.errors import CapExceeded, LabError, ParseError, PredicateError, StrictNotATopology
from btdslab.lab.config import CONFIG_ENV, load_config

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (ParseError, PredicateError, CapExceeded, StrictNotATopology)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _config(args: argparse.Namespace, **extra):
    return load_config(
        args.config,
        min_points=getattr(args, "min_points", None),
        max_points=getattr(args, "max_points", None),
        interval_k=args.interval_k,
        oracle_len=args.oracle_len,
        predicate=getattr(args, "predicate", None),
        workers=args.workers,
        seed=args.seed,
        out=args.out,
        iso_dedup=True if getattr(args, "iso_dedup", False) else None,
        anchor_reading=args.anchor_reading,
        target_openness=args.target_openness,
        **extra,
    )


def cmd_check(args: argparse.Namespace) -> int:
    from btdslab.lab.check import check_instance
    from btdslab.lab.instance import load_instance

    doc = load_instance(args.instance, strict_topology=args.strict_topology)
    _emit(_json(check_instance(doc)), args.out)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    from btdslab.lab.sweep import run_enumerate

    cfg = _config(args)
    out = cfg.out or "atlas.jsonl"
    summary = run_enumerate(cfg, out)
    sys.stdout.write(_json(summary))
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    from btdslab.lab.sweep import run_search

    cfg = _config(args)
    if not cfg.predicate:
        raise ParseError("search needs --predicate")
    _emit(_json(run_search(cfg)), cfg.out)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace) -> int:
    from btdslab.lab.paper import render, verify_paper

    cfg = _config(args)
    max_points = args.max_points or 3
    if not 1 <= max_points <= 3:
        raise ParseError("verify-paper runs its suites at 1..3 points")
    if args.samples < 1:
        raise ParseError("samples must be positive")
    _emit(render(verify_paper(cfg, max_points=max_points, samples=args.samples)), cfg.out)
    return EXIT_OK


def cmd_reverify(args: argparse.Namespace) -> int:
    from btdslab.lab.reverify import reverify_report

    try:
        report = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read report {args.report}: {exc}") from exc
    try:
        result = reverify_report(report, _config(args))
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"report {args.report} is not a recognised report: {exc}") from exc
    _emit(_json(result), args.out)
    return EXIT_OK if result["ok"] else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"YAML config file (default: ${CONFIG_ENV})")
    common.add_argument("--interval-k", type=int, help="interval model subdivision cap")
    common.add_argument("--oracle-len", type=int, help="bounded-oracle sequence length")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("--seed", type=int, help="seed for sampled suites")
    common.add_argument("--out", help="output file (default: stdout; enumerate: atlas.jsonl)")
    common.add_argument("--anchor-reading", choices=("per-set", "union"))
    common.add_argument("--target-openness", choices=("strict", "cover-only"))

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--min-points", type=int)
    sweep.add_argument("--max-points", type=int)
    sweep.add_argument("--iso-dedup", action="store_true", help="one space per isomorphism class")

    p = argparse.ArgumentParser(prog="btdslab", description="Finite-model lab for bitopological dynamical systems")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="evaluate the claims of an instance file")
    c.add_argument("instance")
    c.add_argument("--strict-topology", action="store_true", help="reject families that are not topologies")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("enumerate", parents=[common, sweep], help="write the JSONL atlas")
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("search", parents=[common, sweep], help="find instances matching a predicate")
    s.add_argument("--predicate", help='e.g. "H_almost_Rothberger AND NOT H_Rothberger"')
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify-paper", parents=[common], help="fixture and theorem-suite regression report")
    v.add_argument("--max-points", type=int, help="sweep size for the selection suites (default 3)")
    v.add_argument("--samples", type=int, default=10_000, help="sampled composition triples")
    v.set_defaults(func=cmd_verify_paper)

    r = sub.add_parser("reverify-witness", parents=[common], help="independently re-confirm report witnesses")
    r.add_argument("report")
    r.set_defaults(func=cmd_reverify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LabError as exc:
        print(f"internal invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
